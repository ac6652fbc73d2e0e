#ifndef GT_DESIGN_IO_HPP
#define GT_DESIGN_IO_HPP

#include <iosfwd>
#include <string>

#include "gt/core.hpp"

namespace gt {

// GTDESIGN v1: one header line, then t rows of hex masks.
//
//   GTDESIGN v1 kind=<kind> n=<n> t=<t> seed=<u64> meta=<pairs>
//
// <pairs> is key=value joined with '&'; keys and values are
// percent-encoded (unreserved characters pass through). Rows use the hex
// convention documented on Pool::to_hex.
void write_design(std::ostream& out, const PoolingDesign& design);
std::string design_to_string(const PoolingDesign& design);

PoolingDesign read_design(std::istream& in);
PoolingDesign read_design_file(const std::string& path);
void write_design_file(const std::string& path, const PoolingDesign& design);

std::string percent_encode(const std::string& raw);
std::string percent_decode(const std::string& encoded);

std::string encode_meta(const std::map<std::string, std::string>& meta);
std::map<std::string, std::string> decode_meta(const std::string& encoded);

// Fetches a required meta key or throws std::invalid_argument.
const std::string& meta_at(const PoolingDesign& design, const std::string& key);

}  // namespace gt

#endif
