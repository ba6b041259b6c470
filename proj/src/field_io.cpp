#include "hk/field_io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "hk/errors.hpp"

namespace hk {

namespace {

double parse_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ConfigError("not a number: '" + s + "'");
  }
  if (used != s.size()) throw ConfigError("trailing characters in number: '" + s + "'");
  return v;
}

std::vector<double> unique_in_order(const std::vector<double>& v) {
  std::vector<double> out;
  for (double x : v) {
    if (out.empty() || x > out.back()) out.push_back(x);
  }
  return out;
}

GridField assemble(std::vector<double> xs, std::vector<double> ys, std::vector<double> values) {
  // Rows come in storage order: x is the slow index.
  std::vector<double> gx = unique_in_order(xs);
  std::vector<double> gy;
  for (std::size_t k = 0; k < ys.size() && (k == 0 || xs[k] == xs[0]); ++k) gy.push_back(ys[k]);
  const bool one_d = gy.size() == 1;
  const Domain d = one_d ? Domain::line(Grid1D::from_nodes(gx))
                         : Domain::rectangle(Grid1D::from_nodes(gx), Grid1D::from_nodes(gy));
  if (values.size() != d.size()) throw SizeError("field file does not describe a full tensor grid");
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (xs[k] != d.x(k) || ys[k] != d.y(k))
      throw SizeError("field file rows are not in storage order at row " + std::to_string(k));
  }
  return GridField{d, std::move(values)};
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(std::ostream& os, const GridField& f) {
  os << "x,y,value\n";
  for (std::size_t k = 0; k < f.values.size(); ++k) {
    os << format_double(f.domain.x(k)) << ',' << format_double(f.domain.y(k)) << ','
       << format_double(f.values[k]) << '\n';
  }
}

GridField read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ConfigError("empty field file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "x,y,value") throw ConfigError("field CSV must start with the header x,y,value");
  std::vector<double> xs, ys, vs;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string a, b, c;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c))
      throw ConfigError("malformed field CSV row: " + line);
    xs.push_back(parse_double(a));
    ys.push_back(parse_double(b));
    vs.push_back(parse_double(c));
  }
  return assemble(std::move(xs), std::move(ys), std::move(vs));
}

nlohmann::json field_to_json(const GridField& f) {
  nlohmann::json j;
  j["format"] = "hk-field";
  j["dim"] = f.domain.dim();
  const auto xn = f.domain.gx().nodes();
  j["x_nodes"] = std::vector<double>(xn.begin(), xn.end());
  if (f.domain.dim() == 2) {
    const auto yn = f.domain.gy().nodes();
    j["y_nodes"] = std::vector<double>(yn.begin(), yn.end());
  }
  j["values"] = f.values;
  return j;
}

GridField field_from_json(const nlohmann::json& j) {
  try {
    if (j.at("format").get<std::string>() != "hk-field") throw ConfigError("not a field envelope");
    const int dim = j.at("dim").get<int>();
    auto gx = Grid1D::from_nodes(j.at("x_nodes").get<std::vector<double>>());
    Domain d = dim == 2 ? Domain::rectangle(gx, Grid1D::from_nodes(j.at("y_nodes").get<std::vector<double>>()))
                        : Domain::line(gx);
    auto values = j.at("values").get<std::vector<double>>();
    if (values.size() != d.size()) throw SizeError("field envelope has the wrong number of values");
    return GridField{d, std::move(values)};
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed field envelope: ") + e.what());
  }
}

void save_field(const std::string& path, const GridField& f) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write " + path);
  if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0) {
    // nlohmann prints doubles in shortest round-trip form
    os << field_to_json(f).dump() << '\n';
  } else {
    write_csv(os, f);
  }
}

GridField load_field(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read " + path);
  if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0)
    return field_from_json(nlohmann::json::parse(is));
  return read_csv(is);
}

}  // namespace hk
