#pragma once

#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace ptzflow::testing {

struct Record {
  double t = 0.0;
  std::string event;
  std::map<std::string, std::string> fields;

  int integer(const std::string& key) const { return std::stoi(fields.at(key)); }
};

inline std::vector<Record> parse_trace(const std::string& trace) {
  std::vector<Record> out;
  std::istringstream in(trace);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    Record r;
    std::istringstream tokens(line);
    std::string tok;
    while (tokens >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = tok.substr(0, eq);
      const std::string value = tok.substr(eq + 1);
      if (key == "t") r.t = std::stod(value);
      else if (key == "event") r.event = value;
      else r.fields[key] = value;
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace ptzflow::testing
