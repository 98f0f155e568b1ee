#include "vbrsim/check.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace vbrsim {

namespace {

double number(const std::string& s, int line) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw CheckError("line " + std::to_string(line) + ": expected a number, got '" + s + "'");
  }
  return v;
}

std::string show(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

struct Segment {
  enum class Kind { Key, Index, All, Select } kind = Kind::Key;
  std::string key;
  std::size_t index = 0;
  std::string select_key;
  std::string select_value;
};

std::vector<Segment> split_path(const std::string& path) {
  std::vector<Segment> out;
  std::size_t i = 0;
  auto bad = [&] { throw CheckError("malformed path '" + path + "'"); };
  while (i < path.size()) {
    if (path[i] == '.') {
      if (out.empty()) bad();
      ++i;
    }
    if (i >= path.size()) bad();
    if (path[i] == '[') {
      const auto close = path.find(']', i);
      if (close == std::string::npos) bad();
      const std::string inner = path.substr(i + 1, close - i - 1);
      Segment s;
      if (inner == "*") {
        s.kind = Segment::Kind::All;
      } else if (auto eq = inner.find('='); eq != std::string::npos) {
        s.kind = Segment::Kind::Select;
        s.select_key = inner.substr(0, eq);
        s.select_value = inner.substr(eq + 1);
      } else {
        s.kind = Segment::Kind::Index;
        auto [ptr, ec] = std::from_chars(inner.data(), inner.data() + inner.size(), s.index);
        if (ec != std::errc() || ptr != inner.data() + inner.size()) bad();
      }
      out.push_back(std::move(s));
      i = close + 1;
      continue;
    }
    const auto end = path.find_first_of(".[", i);
    Segment s;
    s.key = path.substr(i, end == std::string::npos ? std::string::npos : end - i);
    if (s.key.empty()) bad();
    out.push_back(std::move(s));
    i = end == std::string::npos ? path.size() : end;
  }
  if (out.empty()) bad();
  return out;
}

bool matches(const Json& element, const Segment& s) {
  if (!element.is_object() || !element.contains(s.select_key)) return false;
  const Json& v = element[s.select_key];
  if (v.is_string()) return v.get<std::string>() == s.select_value;
  return v.dump() == s.select_value;
}

void walk(const Json& node, const std::vector<Segment>& segs, std::size_t at, const std::string& where,
          std::vector<PathMatch>& out) {
  if (at == segs.size()) {
    out.push_back({where, node});
    return;
  }
  const Segment& s = segs[at];
  switch (s.kind) {
    case Segment::Kind::Key:
      if (node.is_object() && node.contains(s.key)) {
        walk(node[s.key], segs, at + 1, where.empty() ? s.key : where + "." + s.key, out);
      }
      break;
    case Segment::Kind::Index:
      if (node.is_array() && s.index < node.size()) {
        walk(node[s.index], segs, at + 1, where + "[" + std::to_string(s.index) + "]", out);
      }
      break;
    case Segment::Kind::All:
    case Segment::Kind::Select:
      if (!node.is_array()) break;
      for (std::size_t i = 0; i < node.size(); ++i) {
        if (s.kind == Segment::Kind::Select && !matches(node[i], s)) continue;
        walk(node[i], segs, at + 1, where + "[" + std::to_string(i) + "]", out);
      }
      break;
  }
}

const char* name(Comparator c) {
  switch (c) {
    case Comparator::Within: return "Within";
    case Comparator::AtLeast: return "AtLeast";
    case Comparator::AtMost: return "AtMost";
    case Comparator::Monotone: return "Monotone";
  }
  return "?";
}

const char* name(Direction d) {
  switch (d) {
    case Direction::NonDecreasing: return "nondecreasing";
    case Direction::NonIncreasing: return "nonincreasing";
    case Direction::Increasing: return "increasing";
    case Direction::Decreasing: return "decreasing";
  }
  return "?";
}

}  // namespace

std::vector<ExpectedOutcome> parse_expectations(const std::string& text) {
  std::vector<ExpectedOutcome> out;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream words(raw);
    std::vector<std::string> w;
    for (std::string s; words >> s;) w.push_back(s);
    if (w.empty()) continue;
    auto fail = [&](const std::string& why) -> void {
      throw CheckError("line " + std::to_string(line) + ": " + why);
    };
    if (w.size() < 3) fail("expected '<path> <comparator> <values...>'");

    ExpectedOutcome e;
    e.line = line;
    e.path = w[0];
    split_path(e.path);
    bool has_tol = false;
    if (w.back().rfind("tol=", 0) == 0) {
      has_tol = true;
      e.tolerance = number(w.back().substr(4), line);
      if (e.tolerance < 0) fail("tolerance must be >= 0");
      w.pop_back();
    }
    const std::string& cmp = w[1];
    std::vector<std::string> args(w.begin() + 2, w.end());
    if (cmp == "Monotone") {
      e.comparator = Comparator::Monotone;
      if (args.size() != 1) fail("Monotone takes one direction");
      bool known = false;
      for (auto d : {Direction::NonDecreasing, Direction::NonIncreasing, Direction::Increasing,
                     Direction::Decreasing}) {
        if (args[0] == name(d)) {
          e.direction = d;
          known = true;
        }
      }
      if (!known) fail("unknown direction '" + args[0] + "'");
    } else {
      for (const auto& a : args) e.values.push_back(number(a, line));
      if (cmp == "Within") {
        e.comparator = Comparator::Within;
        if (e.values.size() == 1) {
          if (!has_tol) fail("Within with one value needs tol=");
        } else if (e.values.size() != 2 || e.values[0] > e.values[1]) {
          fail("Within takes <lo> <hi> with lo <= hi, or <value> tol=<t>");
        }
      } else if (cmp == "AtLeast" || cmp == "AtMost") {
        e.comparator = cmp == "AtLeast" ? Comparator::AtLeast : Comparator::AtMost;
        if (e.values.size() != 1) fail(cmp + " takes one value");
      } else {
        fail("unknown comparator '" + cmp + "'");
      }
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<PathMatch> resolve_path(const Json& doc, const std::string& path) {
  std::vector<PathMatch> out;
  walk(doc, split_path(path), 0, "", out);
  if (out.empty()) throw CheckError("unknown metric path '" + path + "'");
  return out;
}

CheckResult evaluate(const Json& doc, const ExpectedOutcome& e) {
  const auto found = resolve_path(doc, e.path);
  std::string head = e.path + " " + name(e.comparator);
  for (double v : e.values) head += " " + show(v);
  if (e.comparator == Comparator::Monotone) head += std::string(" ") + name(e.direction);
  if (e.tolerance > 0) head += " tol=" + show(e.tolerance);

  for (const auto& m : found) {
    if (!m.value.is_number()) {
      return {false, head + ": " + m.where + " is " + (m.value.is_null() ? "absent" : "not a number")};
    }
  }

  if (e.comparator == Comparator::Monotone) {
    for (std::size_t i = 1; i < found.size(); ++i) {
      const double a = found[i - 1].value.get<double>();
      const double b = found[i].value.get<double>();
      bool ok = true;
      switch (e.direction) {
        case Direction::NonDecreasing: ok = b >= a - e.tolerance; break;
        case Direction::NonIncreasing: ok = b <= a + e.tolerance; break;
        case Direction::Increasing: ok = b > a - e.tolerance; break;
        case Direction::Decreasing: ok = b < a + e.tolerance; break;
      }
      if (!ok) {
        return {false, head + ": violated at " + found[i].where + " (" + show(b) + " after " + show(a) + ")"};
      }
    }
    std::string seq;
    for (const auto& m : found) seq += (seq.empty() ? "" : ", ") + show(m.value.get<double>());
    return {true, head + ": [" + seq + "]"};
  }

  std::string actual;
  for (const auto& m : found) {
    const double x = m.value.get<double>();
    bool ok = true;
    switch (e.comparator) {
      case Comparator::Within:
        if (e.values.size() == 1) {
          ok = std::abs(x - e.values[0]) <= e.tolerance;
        } else {
          ok = x >= e.values[0] - e.tolerance && x <= e.values[1] + e.tolerance;
        }
        break;
      case Comparator::AtLeast: ok = x >= e.values[0] - e.tolerance; break;
      case Comparator::AtMost: ok = x <= e.values[0] + e.tolerance; break;
      case Comparator::Monotone: break;
    }
    if (!ok) return {false, head + ": " + m.where + " = " + show(x)};
    actual += (actual.empty() ? "" : ", ") + show(x);
  }
  return {true, head + ": " + actual};
}

bool CheckSummary::all_passed() const {
  for (const auto& r : results) {
    if (!r.pass) return false;
  }
  return true;
}

CheckSummary check(const Json& doc, const std::vector<ExpectedOutcome>& expectations) {
  CheckSummary s;
  for (const auto& e : expectations) s.results.push_back(evaluate(doc, e));
  return s;
}

}  // namespace vbrsim
