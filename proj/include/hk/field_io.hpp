#pragma once

// Field serialization. CSV has the header "x,y,value" and one row per node in storage
// order; 1D fields write y = 0. The JSON envelope carries the grid nodes explicitly.
// Both formats print 17 significant digits, so a write/read cycle is bit-exact.

#include <iosfwd>
#include <string>

#include "hk/field.hpp"
#include "json.hpp"

namespace hk {

void write_csv(std::ostream& os, const GridField& f);
GridField read_csv(std::istream& is);

nlohmann::json field_to_json(const GridField& f);
GridField field_from_json(const nlohmann::json& j);

void save_field(const std::string& path, const GridField& f);
/// Dispatches on the extension: .json or anything else as CSV.
GridField load_field(const std::string& path);

/// Shortest decimal form that reads back to the same double ("%.17g").
std::string format_double(double v);

}  // namespace hk
