#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "ekr/family.hpp"

namespace ekr {

// ".fam" text format:
//   # comment lines
//   n=<int>
//   one set per line, whitespace-separated 1-based labels
//
// Serialization is normalized (members sorted by bitmask, elements
// ascending) and round-trips byte-exactly.

inline SetFamily parse_family(std::istream& in) {
  std::string line;
  int n = -1;
  std::vector<Mask> members;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos) continue;
    if (line[start] == '#') continue;
    if (n < 0) {
      std::string_view sv(line);
      sv.remove_prefix(start);
      if (sv.substr(0, 2) != "n=")
        throw ParseError("line " + std::to_string(lineno) + ": expected n=<int>");
      try {
        n = std::stoi(std::string(sv.substr(2)));
      } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(lineno) + ": bad ground size");
      }
      if (n < 1 || n > kMaxGround)
        throw ParseError("ground size must be in 1..64");
      continue;
    }
    std::istringstream ls(line);
    Mask m = 0;
    long v;
    while (ls >> v) {
      if (v < 1 || v > n)
        throw ParseError("line " + std::to_string(lineno) + ": element " +
                         std::to_string(v) + " outside [" + std::to_string(n) + "]");
      m |= Mask{1} << (v - 1);
    }
    if (!ls.eof())
      throw ParseError("line " + std::to_string(lineno) + ": not an integer");
    if (m == 0) throw ParseError("line " + std::to_string(lineno) + ": empty set");
    members.push_back(m);
  }
  if (n < 0) throw ParseError("missing n=<int> header");
  return SetFamily(n, std::move(members));
}

inline SetFamily parse_family(const std::string& text) {
  std::istringstream in(text);
  return parse_family(in);
}

inline SetFamily load_family(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return parse_family(in);
}

inline std::string serialize_family(const SetFamily& f) {
  std::string out = "n=" + std::to_string(f.ground()) + "\n";
  for (Mask m : f.members()) {
    bool first = true;
    for_each_bit(m, [&](int i) {
      if (!first) out += ' ';
      out += std::to_string(i + 1);
      first = false;
    });
    out += '\n';
  }
  return out;
}

}  // namespace ekr
