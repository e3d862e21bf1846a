#pragma once

// Text format for multi-controlled-X circuits, one gate per line:
//
//   qubits 4              # optional wire-count directive (wires are 0-based)
//   MCX +0 -2 ; 3         # +w closed control, -w open control, target after ';'
//   CX 0 1                # sugar for MCX +0 ; 1
//   X 2                   # bare NOT
//
// '#' starts a comment. Without a directive the wire count is one past the
// highest wire mentioned.

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cliffhier/gates.hpp"

namespace cliffhier {

struct CircuitParseError : std::runtime_error {
  uint32_t line = 0, col = 0;
  CircuitParseError(uint32_t l, uint32_t c, const std::string& msg)
      : std::runtime_error("line " + std::to_string(l) + ", col " + std::to_string(c) + ": " + msg),
        line(l),
        col(c) {}
};

namespace detail {

struct Token {
  std::string text;
  uint32_t col = 0;
};

inline std::vector<Token> tokenize_line(const std::string& line) {
  std::vector<Token> toks;
  uint32_t i = 0;
  while (i < line.size()) {
    if (line[i] == '#') break;
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    uint32_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) &&
           line[i] != '#')
      ++i;
    toks.push_back({line.substr(start, i - start), start + 1});
  }
  return toks;
}

inline uint32_t parse_wire(const Token& t, uint32_t lineno, size_t offset = 0) {
  const std::string s = t.text.substr(offset);
  if (s.empty()) throw CircuitParseError(lineno, t.col, "expected wire index");
  for (char ch : s)
    if (!std::isdigit(static_cast<unsigned char>(ch)))
      throw CircuitParseError(lineno, t.col, "bad wire index '" + t.text + "'");
  unsigned long v = std::stoul(s);
  if (v > 63) throw CircuitParseError(lineno, t.col, "wire index too large");
  return static_cast<uint32_t>(v);
}

}  // namespace detail

inline Circuit parse_circuit(const std::string& text) {
  Circuit c;
  bool have_n = false;
  uint32_t max_wire = 0;
  bool any_wire = false;
  std::istringstream in(text);
  std::string line;
  uint32_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = detail::tokenize_line(line);
    if (toks.empty()) continue;
    const std::string& head = toks[0].text;
    auto touch = [&](uint32_t w) {
      max_wire = std::max(max_wire, w);
      any_wire = true;
    };
    if (head == "qubits") {
      if (toks.size() != 2) throw CircuitParseError(lineno, toks[0].col, "qubits takes one count");
      c.n = detail::parse_wire(toks[1], lineno);
      if (c.n == 0 || c.n > 20)
        throw CircuitParseError(lineno, toks[1].col, "qubit count out of range");
      have_n = true;
    } else if (head == "X") {
      if (toks.size() != 2) throw CircuitParseError(lineno, toks[0].col, "X takes one target");
      uint32_t t = detail::parse_wire(toks[1], lineno);
      touch(t);
      c.gates.emplace_back(t, std::vector<std::pair<uint32_t, bool>>{});
    } else if (head == "CX") {
      if (toks.size() != 3)
        throw CircuitParseError(lineno, toks[0].col, "CX takes control and target");
      uint32_t ctl = detail::parse_wire(toks[1], lineno);
      uint32_t t = detail::parse_wire(toks[2], lineno);
      touch(ctl);
      touch(t);
      if (ctl == t) throw CircuitParseError(lineno, toks[2].col, "control equals target");
      c.gates.emplace_back(t, std::vector<std::pair<uint32_t, bool>>{{ctl, true}});
    } else if (head == "MCX") {
      std::vector<std::pair<uint32_t, bool>> ctrls;
      size_t i = 1;
      for (; i < toks.size(); ++i) {
        if (toks[i].text == ";") break;
        char sign = toks[i].text.empty() ? '?' : toks[i].text[0];
        if (sign != '+' && sign != '-')
          throw CircuitParseError(lineno, toks[i].col, "control must start with + or -");
        uint32_t w = detail::parse_wire(toks[i], lineno, 1);
        touch(w);
        ctrls.emplace_back(w, sign == '+');
      }
      if (i == toks.size())
        throw CircuitParseError(lineno, toks[0].col, "MCX is missing ';' before the target");
      if (i + 2 != toks.size())
        throw CircuitParseError(lineno, toks[i].col, "MCX takes exactly one target after ';'");
      uint32_t t = detail::parse_wire(toks[i + 1], lineno);
      touch(t);
      try {
        c.gates.emplace_back(t, std::move(ctrls));
      } catch (const std::invalid_argument& e) {
        throw CircuitParseError(lineno, toks[i + 1].col, e.what());
      }
    } else {
      throw CircuitParseError(lineno, toks[0].col, "unknown gate '" + head + "'");
    }
  }
  if (!have_n) c.n = any_wire ? max_wire + 1 : 1;
  if (any_wire && max_wire >= c.n)
    throw CircuitParseError(lineno, 1, "wire index exceeds declared qubit count");
  c.validate();
  return c;
}

inline std::string print_circuit(const Circuit& c) {
  std::string out = "qubits " + std::to_string(c.n) + "\n";
  for (const auto& g : c.gates) {
    if (g.controls.empty()) {
      out += "X " + std::to_string(g.target) + "\n";
    } else if (g.controls.size() == 1 && g.controls[0].second) {
      out += "CX " + std::to_string(g.controls[0].first) + " " + std::to_string(g.target) + "\n";
    } else {
      out += "MCX";
      for (auto& [w, pol] : g.controls)
        out += std::string(" ") + (pol ? "+" : "-") + std::to_string(w);
      out += " ; " + std::to_string(g.target) + "\n";
    }
  }
  return out;
}

}  // namespace cliffhier
