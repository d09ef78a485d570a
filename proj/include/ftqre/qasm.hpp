#pragma once

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "ftqre/gate.hpp"

namespace ftqre {

struct QasmProgram {
  int n_qubits = 0;
  std::string reg_name = "q";
  std::vector<Gate> gates;
};

namespace detail {

// Recursive-descent evaluator for constant angle expressions:
// numbers, pi, + - * /, unary minus and parentheses.
class AngleParser {
 public:
  explicit AngleParser(std::string_view s) : s_(s) {}

  double parse() {
    double v = expr();
    skip();
    if (pos_ != s_.size()) fail();
    return v;
  }

 private:
  std::string_view s_;
  size_t pos_ = 0;

  [[noreturn]] void fail() const {
    throw validation_error("cannot evaluate angle expression '" + std::string(s_) + "'");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  double expr() {
    double v = term();
    for (;;) {
      if (eat('+')) v += term();
      else if (eat('-')) v -= term();
      else return v;
    }
  }
  double term() {
    double v = unary();
    for (;;) {
      if (eat('*')) v *= unary();
      else if (eat('/')) v /= unary();
      else return v;
    }
  }
  double unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return primary();
  }
  double primary() {
    skip();
    if (eat('(')) {
      double v = expr();
      if (!eat(')')) fail();
      return v;
    }
    if (s_.substr(pos_, 2) == "pi") {
      pos_ += 2;
      return kPi;
    }
    std::string num(s_.substr(pos_));
    char* end = nullptr;
    double v = std::strtod(num.c_str(), &end);
    if (end == num.c_str()) fail();
    pos_ += static_cast<size_t>(end - num.c_str());
    return v;
  }
};

inline std::string trim(std::string_view s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

}  // namespace detail

inline double eval_angle(std::string_view expr) { return detail::AngleParser(expr).parse(); }

inline QasmProgram parse_qasm_program(const std::string& text) {
  QasmProgram prog;
  bool have_reg = false;

  // Strip comments, keep newlines so statement line numbers survive.
  std::string clean;
  clean.reserve(text.size());
  for (size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '/' && i + 1 < text.size() && text[i + 1] == '/') {
      while (i < text.size() && text[i] != '\n') ++i;
      if (i < text.size()) clean.push_back('\n');
      continue;
    }
    clean.push_back(text[i]);
  }

  int line = 1;
  size_t start = 0;
  while (start < clean.size()) {
    size_t semi = clean.find(';', start);
    std::string raw = clean.substr(start, semi == std::string::npos ? std::string::npos : semi - start);
    int stmt_line = line;
    for (char c : raw) {
      if (c == '\n') ++line;
    }
    // Statement begins at the first non-blank character.
    for (char c : raw) {
      if (c == '\n') ++stmt_line;
      else if (!std::isspace(static_cast<unsigned char>(c))) break;
    }
    std::string stmt = detail::trim(raw);
    if (semi == std::string::npos) {
      if (!stmt.empty())
        throw validation_error("line " + std::to_string(stmt_line) + ": missing ';'");
      break;
    }
    start = semi + 1;
    if (stmt.empty()) continue;
    auto err = [&](const std::string& what) {
      return validation_error("line " + std::to_string(stmt_line) + ": " + what);
    };

    if (stmt.rfind("OPENQASM", 0) == 0) {
      if (detail::trim(stmt.substr(8)) != "2.0") throw err("unsupported OpenQASM version");
      continue;
    }
    if (stmt.rfind("include", 0) == 0) continue;
    if (stmt.rfind("qreg", 0) == 0) {
      if (have_reg) throw err("only one qreg is supported");
      std::string decl = detail::trim(stmt.substr(4));
      size_t lb = decl.find('['), rb = decl.find(']');
      if (lb == std::string::npos || rb == std::string::npos || rb < lb) throw err("malformed qreg");
      prog.reg_name = detail::trim(decl.substr(0, lb));
      prog.n_qubits = std::atoi(decl.substr(lb + 1, rb - lb - 1).c_str());
      if (prog.n_qubits <= 0) throw err("qreg size must be positive");
      have_reg = true;
      continue;
    }

    // Gate statement: name[(expr)] arg, arg, ...
    size_t i = 0;
    while (i < stmt.size() && (std::isalnum(static_cast<unsigned char>(stmt[i])) || stmt[i] == '_')) ++i;
    std::string name = stmt.substr(0, i);
    GateKind kind;
    if (name.empty() || !gate_from_name(name, kind)) throw err("unsupported gate '" + name + "'");
    if (!have_reg) throw err("gate before qreg declaration");
    Gate g{kind, {}, 0.0};
    std::string rest = detail::trim(stmt.substr(i));
    if (has_angle(kind)) {
      if (rest.empty() || rest[0] != '(') throw err("gate '" + name + "' needs an angle");
      int depth = 0;
      size_t close = std::string::npos;
      for (size_t k = 0; k < rest.size(); ++k) {
        if (rest[k] == '(') ++depth;
        if (rest[k] == ')' && --depth == 0) {
          close = k;
          break;
        }
      }
      if (close == std::string::npos) throw err("unbalanced parentheses");
      try {
        g.angle = eval_angle(rest.substr(1, close - 1));
      } catch (const validation_error& e) {
        throw err(e.what());
      }
      rest = detail::trim(rest.substr(close + 1));
    } else if (!rest.empty() && rest[0] == '(') {
      throw err("gate '" + name + "' takes no angle");
    }
    std::stringstream args(rest);
    std::string arg;
    while (std::getline(args, arg, ',')) {
      arg = detail::trim(arg);
      size_t lb = arg.find('['), rb = arg.find(']');
      if (lb == std::string::npos || rb == std::string::npos || rb < lb)
        throw err("malformed qubit argument '" + arg + "'");
      if (detail::trim(arg.substr(0, lb)) != prog.reg_name)
        throw err("unknown register '" + arg.substr(0, lb) + "'");
      std::string idx = arg.substr(lb + 1, rb - lb - 1);
      char* end = nullptr;
      long q = std::strtol(idx.c_str(), &end, 10);
      if (end == idx.c_str() || *end != '\0') throw err("malformed qubit index '" + idx + "'");
      if (q < 0 || q >= prog.n_qubits)
        throw err("qubit index " + std::to_string(q) + " out of range");
      g.qubits.push_back(static_cast<int>(q));
    }
    try {
      validate_gate(g, prog.n_qubits);
    } catch (const validation_error& e) {
      throw err(e.what());
    }
    prog.gates.push_back(std::move(g));
  }
  if (!have_reg) throw validation_error("no qreg declaration");
  return prog;
}

inline std::vector<Gate> parse_qasm(const std::string& text) { return parse_qasm_program(text).gates; }

inline std::string format_angle(double a) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", a);
  return buf;
}

inline std::string emit_qasm(const std::vector<Gate>& gates, int n_qubits = -1) {
  if (n_qubits < 0) n_qubits = std::max(1, width_of(gates));
  std::string out = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[" + std::to_string(n_qubits) + "];\n";
  for (const auto& g : gates) {
    out += gate_name(g.kind);
    if (has_angle(g.kind)) out += "(" + format_angle(g.angle) + ")";
    for (size_t i = 0; i < g.qubits.size(); ++i) {
      out += (i == 0 ? " " : ",");
      out += "q[" + std::to_string(g.qubits[i]) + "]";
    }
    out += ";\n";
  }
  return out;
}

}  // namespace ftqre
