#include "wmtsq/format.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace wmtsq {

namespace {

using nlohmann::json;

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::optional<Bound> parse_bound_token(const std::string& tok) {
  if (tok == "inf" || tok == "+inf") return Bound::pos_infinity();
  if (tok == "-inf") return Bound::neg_infinity();
  try {
    size_t used = 0;
    long long v = std::stoll(tok, &used);
    if (used != tok.size()) return std::nullopt;
    return Bound::finite(v);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::optional<WeightInterval> parse_interval_token(const std::string& tok) {
  if (tok.size() < 5 || tok.front() != '[' || tok.back() != ']') return std::nullopt;
  std::string body = tok.substr(1, tok.size() - 2);
  size_t comma = body.find(',');
  if (comma == std::string::npos) return std::nullopt;
  auto lo = parse_bound_token(body.substr(0, comma));
  auto hi = parse_bound_token(body.substr(comma + 1));
  if (!lo || !hi) return std::nullopt;
  return WeightInterval::make(*lo, *hi);
}

}  // namespace

Wmts parse_wmts_text(std::string_view text, std::string_view filename) {
  std::string file(filename);
  std::istringstream in{std::string(text)};
  std::string raw;
  int lineno = 0;

  auto fail = [&](const std::string& what) -> void {
    throw SyntaxError(file, lineno, what);
  };

  bool have_header = false, is_impl = false;
  bool have_states = false, have_initial = false;
  Wmts s;

  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.resize(hash);
    std::vector<std::string> tok = split_ws(line);
    if (tok.empty()) continue;

    if (!have_header) {
      if (tok.size() != 1 || (tok[0] != "wmts" && tok[0] != "impl"))
        fail("expected header line 'wmts' or 'impl'");
      is_impl = tok[0] == "impl";
      have_header = true;
      continue;
    }
    if (tok[0] == "states:") {
      if (tok.size() < 2) fail("empty states list");
      s.states.assign(tok.begin() + 1, tok.end());
      have_states = true;
      continue;
    }
    if (tok[0] == "initial:") {
      if (tok.size() != 2) fail("initial: takes exactly one state");
      s.initial = tok[1];
      have_initial = true;
      continue;
    }
    if (!have_states || !have_initial)
      fail("states: and initial: must come before transitions");

    if (is_impl) {
      if (tok.size() != 4) fail("expected: SRC ACTION W DST");
      auto w = parse_bound_token(tok[2]);
      if (!w || !w->is_finite()) fail("expected an integer weight: " + tok[2]);
      Transition t{tok[0],
                   SpecLabel{tok[1], WeightInterval::point(w->finite_value())},
                   tok[3]};
      s.may.push_back(t);
      s.must.push_back(t);
    } else {
      if (tok.size() != 5) fail("expected: KIND SRC ACTION [LO,HI] DST");
      if (tok[0] != "may" && tok[0] != "must")
        fail("transition kind must be may or must: " + tok[0]);
      auto interval = parse_interval_token(tok[3]);
      if (!interval) fail("malformed interval token: " + tok[3]);
      Transition t{tok[1], SpecLabel{tok[2], *interval}, tok[4]};
      (tok[0] == "may" ? s.may : s.must).push_back(t);
    }
  }
  if (!have_header) fail("empty input");
  if (!have_states) fail("missing states: line");
  if (!have_initial) fail("missing initial: line");
  s.normalize();
  return s;
}

std::string write_wmts_text(const Wmts& s) {
  Wmts c = s;
  c.normalize();
  std::ostringstream out;
  bool impl = is_implementation(c);
  out << (impl ? "impl" : "wmts") << "\n";
  out << "states:";
  for (const auto& st : c.states) out << " " << st;
  out << "\n";
  out << "initial: " << c.initial << "\n";
  if (impl) {
    for (const auto& t : c.must) {
      out << t.src << " " << t.label.action << " "
          << t.label.interval.lo().finite_value() << " " << t.dst << "\n";
    }
  } else {
    for (const auto& t : c.may)
      out << "may " << t.src << " " << t.label.action << " "
          << to_string(t.label.interval) << " " << t.dst << "\n";
    for (const auto& t : c.must)
      out << "must " << t.src << " " << t.label.action << " "
          << to_string(t.label.interval) << " " << t.dst << "\n";
  }
  return out.str();
}

namespace {

json bound_to_json(const Bound& b) {
  if (b.is_neg_infinity()) return "-inf";
  if (b.is_pos_infinity()) return "inf";
  return b.finite_value();
}

Bound bound_from_json(const json& j, const std::string& file) {
  if (j.is_number_integer()) return Bound::finite(j.get<long long>());
  if (j.is_string()) {
    auto b = parse_bound_token(j.get<std::string>());
    if (b) return *b;
  }
  throw SyntaxError(file, 0, "malformed bound: " + j.dump());
}

json transitions_to_json(const std::vector<Transition>& ts) {
  json arr = json::array();
  for (const auto& t : ts) {
    arr.push_back({{"src", t.src},
                   {"action", t.label.action},
                   {"lo", bound_to_json(t.label.interval.lo())},
                   {"hi", bound_to_json(t.label.interval.hi())},
                   {"dst", t.dst}});
  }
  return arr;
}

std::vector<Transition> transitions_from_json(const json& arr,
                                              const std::string& file) {
  std::vector<Transition> out;
  for (const auto& e : arr) {
    auto interval = WeightInterval::make(bound_from_json(e.at("lo"), file),
                                         bound_from_json(e.at("hi"), file));
    if (!interval) throw SyntaxError(file, 0, "malformed interval: " + e.dump());
    out.push_back({e.at("src").get<std::string>(),
                   SpecLabel{e.at("action").get<std::string>(), *interval},
                   e.at("dst").get<std::string>()});
  }
  return out;
}

}  // namespace

Wmts parse_wmts_json(std::string_view text, std::string_view filename) {
  std::string file(filename);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SyntaxError(file, 0, e.what());
  }
  try {
    Wmts s;
    for (const auto& st : j.at("states")) s.states.push_back(st.get<std::string>());
    s.initial = j.at("initial").get<std::string>();
    s.may = transitions_from_json(j.at("may"), file);
    s.must = transitions_from_json(j.at("must"), file);
    s.normalize();
    return s;
  } catch (const json::exception& e) {
    throw SyntaxError(file, 0, e.what());
  }
}

std::string write_wmts_json(const Wmts& s) {
  Wmts c = s;
  c.normalize();
  json j{{"states", c.states},
         {"initial", c.initial},
         {"may", transitions_to_json(c.may)},
         {"must", transitions_to_json(c.must)}};
  return j.dump(2) + "\n";
}

std::string write_game_json(const GameGraph& g) {
  json p1 = json::array();
  for (size_t i = 0; i < g.v1.size(); ++i) {
    const auto& v = g.v1[i];
    json e{{"id", i}, {"sink", v.sink}};
    if (!v.sink) {
      e["s1"] = v.s1;
      e["s2"] = v.s2;
    }
    p1.push_back(e);
  }
  json p2 = json::array();
  for (size_t i = 0; i < g.v2.size(); ++i) {
    const auto& v = g.v2[i];
    json e{{"id", i}, {"sink", v.sink}};
    if (!v.sink) {
      e["challenge"] = v.may_challenge ? "may" : "must";
      e["s1"] = v.s1;
      e["s2"] = v.s2;
      e["action"] = v.label.action;
      e["lo"] = bound_to_json(v.label.interval.lo());
      e["hi"] = bound_to_json(v.label.interval.hi());
    }
    p2.push_back(e);
  }
  json edges = json::array();
  auto weight_json = [](ExtReal w) -> json {
    if (w.is_infinite()) return "inf";
    return w.value();
  };
  for (size_t i = 0; i < g.v1_edges.size(); ++i) {
    for (const auto& e : g.v1_edges[i]) {
      edges.push_back({{"from", {"p1", i}},
                       {"to", {"p2", e.target}},
                       {"weight", weight_json(e.weight)}});
    }
  }
  for (size_t i = 0; i < g.v2_edges.size(); ++i) {
    for (const auto& e : g.v2_edges[i]) {
      edges.push_back({{"from", {"p2", i}},
                       {"to", {"p1", e.target}},
                       {"weight", weight_json(e.weight)}});
    }
  }
  json j{{"start", g.start},
         {"player1", p1},
         {"player2", p2},
         {"edges", edges}};
  return j.dump(2) + "\n";
}

Wmts load_wmts(const std::string& path, bool auto_may) {
  std::ifstream in(path);
  if (!in) throw SyntaxError(path, 0, "cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();

  size_t first = text.find_first_not_of(" \t\r\n");
  Wmts s;
  if (first != std::string::npos && text[first] == '{') {
    s = parse_wmts_json(text, path);
  } else {
    s = parse_wmts_text(text, path);
  }
  if (auto_may) {
    std::vector<Transition> extra;
    for (const auto& m : s.must) {
      bool covered = false;
      for (const auto& t : s.may) {
        if (t.src == m.src && t.dst == m.dst && label_refines(m.label, t.label)) {
          covered = true;
          break;
        }
      }
      if (!covered) extra.push_back(m);
    }
    s.may.insert(s.may.end(), extra.begin(), extra.end());
    s.normalize();
  }
  ensure_valid(s, path.c_str());
  return s;
}

std::string write_wmts(const Wmts& s, FileFormat format) {
  return format == FileFormat::kText ? write_wmts_text(s) : write_wmts_json(s);
}

}  // namespace wmtsq
