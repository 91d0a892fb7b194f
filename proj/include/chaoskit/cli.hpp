#pragma once

// Command-line front end: `systems list`, `analyze`, `classify`, `suite`.
//
// Configuration comes from an optional JSON file (--config) with flags
// overriding file values; flag names mirror the config keys. Every report
// embeds the resolved configuration, defaults included.
//
// Exit codes: 0 success, 1 a suite criterion failed, 2 configuration error,
// 3 insufficient data.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "chaoskit/classify.hpp"
#include "chaoskit/distfn.hpp"
#include "chaoskit/errors.hpp"
#include "chaoskit/fixtures.hpp"
#include "chaoskit/report.hpp"
#include "chaoskit/rtchaos.hpp"
#include "chaoskit/sequence.hpp"
#include "chaoskit/systems.hpp"
#include "chaoskit/theorems.hpp"

namespace chaoskit::cli {

using nlohmann::json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitInsufficient = 3;

inline const std::vector<std::string> kHarnesses{"theorem1", "theorem2", "lemma3", "example1",
                                                 "remark3",  "rt",       "lattice"};

// ---------------------------------------------------------------------------
// Configuration

inline json default_config() {
  return {{"system", nullptr},
          {"horizon", nullptr},
          {"seed", 0},
          {"out", "."},
          {"pairs", json::array()},
          {"family", 0},
          {"sequences", json::array()},
          {"flag", "dc1"},
          {"harness", json::array()},
          {"N", {2, 3, 5}},
          {"t", 0.5},
          {"pair_count", nullptr},
          {"thresholds", json::object()},
          {"witness", true},
          {"timing", false},
          {"allow_noncompact", false}};
}

/// Overlays `src` onto `dst`; unknown top-level or threshold keys are errors.
inline void overlay_config(json& dst, const json& src) {
  if (!src.is_object()) throw ConfigError("config", "top level must be a JSON object");
  const json known = to_json(Thresholds{});
  for (auto it = src.begin(); it != src.end(); ++it) {
    if (!dst.contains(it.key())) throw ConfigError(it.key(), "unknown configuration key");
    if (it.key() == "thresholds") {
      if (!it->is_object()) throw ConfigError("thresholds", "must be an object");
      for (auto t = it->begin(); t != it->end(); ++t) {
        if (!known.contains(t.key())) throw ConfigError("thresholds." + t.key(), "unknown threshold");
        dst["thresholds"][t.key()] = *t;
      }
    } else {
      dst[it.key()] = *it;
    }
  }
}

template <class T>
T get_field(const json& j, const std::string& key, const std::string& field) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(field, std::string("invalid value (") + e.what() + ")");
  }
}

inline std::uint64_t positive(const json& j, const std::string& key, const std::string& field) {
  if (!j.contains(key) || !j.at(key).is_number_integer() || j.at(key).get<std::int64_t>() < 1)
    throw ConfigError(field, "must be a positive integer");
  return j.at(key).get<std::uint64_t>();
}

/// Builds a SystemSpec. Caps that are not given default to what `horizon` needs.
inline SystemSpec parse_system(const json& j, std::optional<std::uint64_t> horizon, const std::string& field = "system") {
  json obj = j.is_string() ? json{{"kind", j}} : j;
  if (!obj.is_object() || !obj.contains("kind") || !obj["kind"].is_string())
    throw ConfigError(field, "expected a system name or an object with \"kind\"");
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (it.key() != "kind" && it.key() != "horizon_cap" && it.key() != "alpha" && it.key() != "N" &&
        it.key() != "base")
      throw ConfigError(field + "." + it.key(), "unknown system key");
  const auto kind = parse_system_kind(obj["kind"].get<std::string>());
  if (!kind) throw ConfigError(field + ".kind", "unknown system '" + obj["kind"].get<std::string>() + "'");

  SystemSpec spec;
  spec.kind = *kind;
  if (obj.contains("horizon_cap")) spec.horizon_cap = positive(obj, "horizon_cap", field + ".horizon_cap");
  else if (horizon) spec.horizon_cap = *horizon;
  if (obj.contains("alpha")) spec.alpha = get_field<double>(obj, "alpha", field + ".alpha");
  if (spec.kind == SystemKind::iterate) {
    spec.power = positive(obj, "N", field + ".N");
    if (!obj.contains("base")) throw ConfigError(field + ".base", "iterate requires a base system");
    const SystemSpec base = parse_system(obj["base"], spec.horizon_cap * spec.power, field + ".base");
    spec.base = std::make_shared<const SystemSpec>(base);
  }
  try {
    spec.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(field + "." + e.field(), e.what());
  }
  return spec;
}

inline Thresholds parse_thresholds(const json& j, const System& system) {
  Thresholds th;
  if (!j.contains("resolution")) th = Thresholds::for_system(system, th);
  auto num = [&](const char* key, double& dst) {
    if (j.contains(key)) dst = get_field<double>(j, key, std::string("thresholds.") + key);
  };
  auto count = [&](const char* key, auto& dst) {
    if (j.contains(key)) dst = get_field<std::uint64_t>(j, key, std::string("thresholds.") + key);
  };
  num("zero_tol", th.zero_tol);
  num("one_tol", th.one_tol);
  num("gap_tol", th.gap_tol);
  num("proximal_tol", th.proximal_tol);
  num("separation_tol", th.separation_tol);
  num("resolution", th.resolution);
  count("j_min_width", th.j_min_width);
  count("grid_points", th.grid_points);
  count("burn_in", th.burn_in);
  th.validate();
  return th;
}

/// "identity", "arith:STEP[:START]" or "explicit:I,J,K,...".
inline SequenceSpec parse_sequence(const std::string& text) {
  auto numbers = [&](const std::string& body, char sep) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(body);
    std::string tok;
    while (std::getline(ss, tok, sep)) {
      try {
        std::size_t used = 0;
        if (tok.empty() || tok[0] == '-') throw std::invalid_argument("negative");
        out.push_back(std::stoull(tok, &used));
        if (used != tok.size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw ConfigError("sequences", "bad integer '" + tok + "' in '" + text + "'");
      }
    }
    return out;
  };
  if (text == "identity") return SequenceSpec::identity();
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::string body = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (kind == "arith") {
    const auto v = numbers(body, ':');
    if (v.empty() || v.size() > 2) throw ConfigError("sequences", "expected arith:STEP[:START], got '" + text + "'");
    if (v[0] < 1) throw ConfigError("sequences", "arith step must be >= 1");
    return SequenceSpec::arith(v[0], v.size() == 2 ? v[1] : 0);
  }
  if (kind == "explicit") {
    const auto v = numbers(body, ',');
    if (v.empty()) throw ConfigError("sequences", "explicit sequence needs at least one index");
    return SequenceSpec::explicit_list(v);
  }
  throw ConfigError("sequences", "unknown sequence form '" + text + "'");
}

/// A point of `system` from its textual coordinate: a real for interval,
/// rotation and example1 (seed) systems, a binary parameter word for shift2.
inline Point parse_point(const System& system, const std::string& token) {
  const System root = system.root();
  try {
    if (root.spec().kind == SystemKind::shift2) {
      std::vector<std::uint8_t> word;
      for (char c : token) {
        if (c != '0' && c != '1') throw DomainError("shift2 points are binary parameter words, got '" + token + "'");
        word.push_back(static_cast<std::uint8_t>(c - '0'));
      }
      return scrambled_family_point(word, root.horizon_cap());
    }
    std::size_t used = 0;
    const double x = std::stod(token, &used);
    if (used != token.size()) throw DomainError("trailing characters in '" + token + "'");
    return system.from_coordinate(x);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument&) {
    throw ConfigError("pairs", "not a number: '" + token + "'");
  } catch (const std::out_of_range&) {
    throw ConfigError("pairs", "out of range: '" + token + "'");
  } catch (const Error& e) {
    throw ConfigError("pairs", e.what());
  }
}

inline std::pair<std::string, std::string> split_pair(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos || text.find(',', comma + 1) != std::string::npos)
    throw ConfigError("pairs", "expected X,Y, got '" + text + "'");
  return {text.substr(0, comma), text.substr(comma + 1)};
}

struct Resolved {
  json config;   // fully resolved, embedded in every report
  std::optional<SystemSpec> system;
  std::optional<std::uint64_t> horizon;
  std::uint64_t seed = 0;
  std::filesystem::path out;
  std::vector<std::string> pairs;
  std::size_t family = 0;
  std::vector<SequenceSpec> sequences;
  ChaosFlag flag = ChaosFlag::dc1;
  std::vector<std::string> harness;
  std::vector<std::uint64_t> N;
  double t = 0.5;
  std::optional<std::size_t> pair_count;
  bool witness = true;
  bool timing = false;
  bool allow_noncompact = false;
};

inline Resolved resolve(json cfg) {
  Resolved r;
  if (!cfg["horizon"].is_null()) r.horizon = positive(cfg, "horizon", "horizon");
  if (!cfg["seed"].is_number_integer() || cfg["seed"].get<std::int64_t>() < 0)
    throw ConfigError("seed", "must be a nonnegative integer");
  r.seed = cfg["seed"].get<std::uint64_t>();
  r.out = get_field<std::string>(cfg, "out", "out");
  r.pairs = get_field<std::vector<std::string>>(cfg, "pairs", "pairs");
  r.family = get_field<std::size_t>(cfg, "family", "family");
  for (const auto& s : get_field<std::vector<std::string>>(cfg, "sequences", "sequences"))
    r.sequences.push_back(parse_sequence(s));
  const auto flag = parse_chaos_flag(get_field<std::string>(cfg, "flag", "flag"));
  if (!flag) throw ConfigError("flag", "unknown chaos flag '" + cfg["flag"].get<std::string>() + "'");
  r.flag = *flag;
  r.harness = get_field<std::vector<std::string>>(cfg, "harness", "harness");
  r.N = get_field<std::vector<std::uint64_t>>(cfg, "N", "N");
  for (auto n : r.N)
    if (n < 1) throw ConfigError("N", "iterate powers must be >= 1");
  r.t = get_field<double>(cfg, "t", "t");
  if (!(r.t > 0.0)) throw ConfigError("t", "must be positive");
  if (!cfg["pair_count"].is_null()) r.pair_count = positive(cfg, "pair_count", "pair_count");
  r.witness = get_field<bool>(cfg, "witness", "witness");
  r.timing = get_field<bool>(cfg, "timing", "timing");
  r.allow_noncompact = get_field<bool>(cfg, "allow_noncompact", "allow_noncompact");
  if (!cfg["system"].is_null()) {
    r.system = parse_system(cfg["system"], r.horizon);
    cfg["system"] = to_json(*r.system);
    if (r.horizon && *r.horizon > r.system->horizon_cap)
      throw ConfigError("horizon", "exceeds system.horizon_cap (" + std::to_string(r.system->horizon_cap) + ")");
    cfg["thresholds"] = to_json(parse_thresholds(cfg["thresholds"], System(*r.system)));
  }
  r.config = std::move(cfg);
  return r;
}

// ---------------------------------------------------------------------------
// Subcommands

inline void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("out", "cannot create directory " + dir.string() + ": " + ec.message());
}

inline int cmd_systems_list(std::ostream& out) {
  out << "tent        x -> 1 - |1 - 2x| on [0, 1]\n"
         "logistic4   x -> 4x(1 - x) on [0, 1]\n"
         "rotation    x -> x + alpha mod 1 (alpha default 0.618033988749895)\n"
         "shift2      left shift on {0,1}^N, d = 2^-(first mismatch)\n"
         "example1    x -> x + 1 on [0, inf) with the block metric\n"
         "identity    x -> x on [0, 1]\n"
         "iterate     N-fold composition of a base system\n";
  return kExitOk;
}

inline Thresholds thresholds_of(const Resolved& r) {
  Thresholds th;
  const auto& j = r.config["thresholds"];
  th.zero_tol = j["zero_tol"];
  th.one_tol = j["one_tol"];
  th.gap_tol = j["gap_tol"];
  th.j_min_width = j["j_min_width"];
  th.proximal_tol = j["proximal_tol"];
  th.separation_tol = j["separation_tol"];
  th.resolution = j["resolution"];
  th.grid_points = j["grid_points"];
  th.burn_in = j["burn_in"];
  return th;
}

inline int cmd_analyze(const Resolved& r, std::ostream& out) {
  if (!r.system) throw ConfigError("system", "required");
  if (!r.horizon) throw ConfigError("horizon", "required");
  if (r.pairs.size() != 1) throw ConfigError("pairs", "analyze takes exactly one --pair");
  const System sys(*r.system);
  const Thresholds th = thresholds_of(r);
  const auto [a, b] = split_pair(r.pairs[0]);
  const Point x = parse_point(sys, a), y = parse_point(sys, b);
  if (th.burn_in >= *r.horizon) throw ConfigError("thresholds.burn_in", "must be smaller than horizon");

  const auto profile = distance_profile(sys, x, y, *r.horizon, r.pairs[0]);
  const auto est = estimate_for(profile, th);
  const auto verdict = classify_profile(profile, th, r.sequences);
  json doc{{"config", r.config}, {"pair", {a, b}}, {"estimate", to_json(est)}, {"verdict", to_json(verdict)}};
  if (r.witness && verdict.liyorke->flag) {
    const auto w = witness_sequence(profile, th);
    json wj{{"found", w.sequence.has_value()}, {"runs", w.runs}};
    if (w.sequence) {
      wj["sequence"] = to_json(*w.sequence);
      wj["sdc"] = to_json(sdc_from_profile(profile, *w.sequence, th));
    } else {
      wj["failure"] = w.failure;
    }
    doc["witness"] = wj;
  }
  ensure_dir(r.out);
  write_text((r.out / "estimate.csv").string(), estimate_csv(est));
  write_text((r.out / "verdict.json").string(), canonical_dump(doc));
  out << "wrote " << (r.out / "estimate.csv").string() << " and " << (r.out / "verdict.json").string() << "\n";
  return kExitOk;
}

inline int cmd_classify(const Resolved& r, std::ostream& out) {
  if (!r.system) throw ConfigError("system", "required");
  if (!r.horizon) throw ConfigError("horizon", "required");
  const System sys(*r.system);
  const Thresholds th = thresholds_of(r);
  json doc{{"config", r.config}};

  if (r.family > 0) {
    if (r.family < 2) throw ConfigError("family", "need at least two members");
    std::vector<Point> candidates;
    json labels = json::array();
    if (sys.root().spec().kind == SystemKind::shift2) {
      for (const auto& w : family_words(r.family)) {
        candidates.emplace_back(scrambled_family_point(w, sys.root().horizon_cap()));
        labels.push_back(word_string(w));
      }
    } else {
      Rng rng = substream(r.seed, 0xFA);
      for (std::size_t k = 0; k < r.family; ++k) {
        candidates.push_back(sys.sample(rng));
        labels.push_back("sample#" + std::to_string(k));
      }
    }
    const auto found = scrambled_search(sys, candidates, *r.horizon, th, r.flag);
    json pairs = json::array();
    for (const auto& p : found.pairs)
      pairs.push_back({{"i", p.i}, {"j", p.j}, {"verdict", to_json(p.verdict)}});
    doc["candidates"] = labels;
    doc["pairs"] = pairs;
    doc["scrambled_set"] = {{"flag", std::string(to_string(r.flag))}, {"members", found.members},
                            {"size", found.members.size()}};
    out << "scrambled set size " << found.members.size() << " of " << r.family << " for "
        << to_string(r.flag) << "\n";
  } else {
    if (r.pairs.empty()) throw ConfigError("pairs", "give --pair or --family");
    json pairs = json::array();
    for (const auto& text : r.pairs) {
      const auto [a, b] = split_pair(text);
      const auto v = classify_pair(sys, parse_point(sys, a), parse_point(sys, b), *r.horizon, th, r.sequences);
      pairs.push_back({{"pair", {a, b}}, {"verdict", to_json(v)}});
    }
    doc["pairs"] = pairs;
    out << "classified " << r.pairs.size() << " pair(s)\n";
  }
  ensure_dir(r.out);
  write_text((r.out / "classify.json").string(), canonical_dump(doc));
  return kExitOk;
}

// ---------------------------------------------------------------------------
// Suite

namespace detail {

inline std::vector<PointPair> pairs_for(const System& sys, const Resolved& r, std::size_t default_family,
                                        std::size_t default_count) {
  switch (sys.root().spec().kind) {
    case SystemKind::shift2:
      if (r.pair_count && r.family == 0) return sampled_pairs(sys, *r.pair_count, r.seed);
      return family_pairs(r.family > 0 ? r.family : default_family, sys.root().horizon_cap(),
                          r.pair_count.value_or(SIZE_MAX));
    case SystemKind::example1:
      return example1_pairs(r.pair_count.value_or(default_count), r.seed, sys.root().horizon_cap());
    default:
      return sampled_pairs(sys, r.pair_count.value_or(default_count), r.seed);
  }
}

inline System suite_system(const Resolved& r, SystemKind fallback, std::uint64_t cap) {
  if (r.system) return System(*r.system);
  return System(SystemSpec::simple(fallback, cap));
}

inline HarnessReport run_theorem1(const Resolved& r) {
  const std::uint64_t horizon = r.horizon.value_or(100'000);
  const System sys = suite_system(r, SystemKind::shift2, horizon);
  const Thresholds th = r.system ? thresholds_of(r) : Thresholds::for_system(sys);
  const auto pairs = pairs_for(sys, r, 8, 28);
  auto seqs = r.sequences;
  if (seqs.empty()) seqs = {SequenceSpec::arith(2), SequenceSpec::arith(3)};
  Theorem1Options opt;
  opt.allow_noncompact = r.allow_noncompact;
  std::vector<HarnessReport> parts;
  for (const auto& q : seqs) parts.push_back(theorem1_harness(sys, pairs, q, horizon, th, opt));
  return merge_reports("theorem1", parts);
}

inline HarnessReport run_theorem2(const Resolved& r) {
  const std::uint64_t horizon = r.horizon.value_or(100'000);
  std::vector<std::pair<System, std::vector<PointPair>>> groups;
  if (r.system) {
    const System sys(*r.system);
    groups.emplace_back(sys, pairs_for(sys, r, 7, 20));
  } else {
    const System shift(SystemSpec::simple(SystemKind::shift2, horizon));
    const System ex1(SystemSpec::simple(SystemKind::example1, horizon));
    groups.emplace_back(shift, family_pairs(7, horizon, 20));
    groups.emplace_back(ex1, example1_pairs(10, r.seed, horizon));
  }
  std::vector<HarnessReport> parts;
  for (const auto& [sys, pairs] : groups) {
    const Thresholds th = r.system ? thresholds_of(r) : Thresholds::for_system(sys);
    for (auto n : r.N) parts.push_back(theorem2_harness(sys, pairs, n, horizon / n, th));
  }
  return merge_reports("theorem2", parts);
}

inline HarnessReport run_lemma3(const Resolved& r) {
  const std::uint64_t horizon = r.horizon.value_or(100'000);
  const std::uint64_t N = r.N.empty() ? 2 : r.N.front();
  std::vector<HarnessReport> parts;
  if (r.system && !r.pairs.empty()) {
    const System sys(*r.system);
    const Thresholds th = thresholds_of(r);
    for (const auto& text : r.pairs) {
      const auto [a, b] = split_pair(text);
      for (auto n : r.N)
        parts.push_back(lemma3_harness(sys, {text, parse_point(sys, a), parse_point(sys, b)}, r.t, n, horizon / n, th));
    }
  } else {
    const System rot(SystemSpec::simple(SystemKind::rotation, horizon));
    const PointPair rp{"rotation(0.1,0.4)", rot.from_coordinate(0.1), rot.from_coordinate(0.4)};
    for (double t : {0.2, 0.5}) parts.push_back(lemma3_harness(rot, rp, t, N, horizon / N, Thresholds{}));
    const System ex1(SystemSpec::simple(SystemKind::example1, horizon));
    const PointPair ep{"example1(0.25,0.75)", ex1.from_coordinate(0.25), ex1.from_coordinate(0.75)};
    parts.push_back(lemma3_harness(ex1, ep, 0.5, N, horizon / N, Thresholds::for_system(ex1)));
  }
  return merge_reports("lemma3", parts);
}

inline HarnessReport run_example1(const Resolved& r) {
  const std::uint64_t horizon = r.horizon.value_or(1'000'000);
  return example1_reproduction(horizon, example1_seed_pairs(r.pair_count.value_or(10), r.seed));
}

/// Even indices inside the even blocks [L_2k, L_2k+1), k >= 1, below `horizon`.
inline SequenceSpec even_block_sequence(std::uint64_t horizon) {
  const auto table = example1_blocks(horizon);
  std::vector<std::uint64_t> q;
  for (std::size_t m = 2; m < table.L.size(); m += 2) {
    const std::uint64_t end = m + 1 < table.L.size() ? table.L[m + 1] : horizon;
    for (std::uint64_t i = table.L[m] + (table.L[m] % 2); i < std::min(end, horizon); i += 2) q.push_back(i);
  }
  return SequenceSpec::explicit_list(std::move(q));
}

inline SequenceSpec squares_sequence(std::uint64_t horizon) {
  std::vector<std::uint64_t> q;
  for (std::uint64_t i = 1; i * i < horizon; ++i) q.push_back(i * i);
  return SequenceSpec::explicit_list(std::move(q));
}

inline HarnessReport run_remark3(const Resolved& r) {
  const std::uint64_t horizon = r.horizon.value_or(100'000);
  const System ex1(SystemSpec::simple(SystemKind::example1, horizon));
  const Thresholds eth = Thresholds::for_system(ex1);
  const PointPair ep{"example1(0.25,0.75)", ex1.from_coordinate(0.25), ex1.from_coordinate(0.75)};
  const System shift(SystemSpec::simple(SystemKind::shift2, horizon));
  const auto fp = family_pairs(2, horizon).front();

  std::vector<HarnessReport> parts;
  parts.push_back(remark3_check(ex1, ep, even_block_sequence(horizon), horizon, eth));
  parts.push_back(remark3_check(ex1, ep, squares_sequence(horizon), horizon, eth));
  parts.push_back(remark3_check(shift, fp, SequenceSpec::arith(2), horizon, Thresholds::for_system(shift)));
  for (const auto& q : r.sequences)
    if (r.system) {
      const System sys(*r.system);
      for (const auto& text : r.pairs) {
        const auto [a, b] = split_pair(text);
        parts.push_back(remark3_check(sys, {text, parse_point(sys, a), parse_point(sys, b)}, q, horizon,
                                      thresholds_of(r)));
      }
    }
  return merge_reports("remark3", parts);
}

inline HarnessReport run_rt(const Resolved& r) {
  RTParams p;
  p.seed = r.seed;
  p.transitivity_horizon = r.horizon.value_or(100'000);
  return rt_harness(p, p.transitivity_horizon);
}

inline HarnessReport run_lattice(const Resolved& r) {
  const std::uint64_t horizon = r.horizon.value_or(100'000);
  std::vector<HarnessReport> parts;
  if (r.system) {
    const System sys(*r.system);
    parts.push_back(lattice_harness(sys, pairs_for(sys, r, 15, 100), horizon, thresholds_of(r), r.sequences));
  } else {
    for (auto kind : {SystemKind::tent, SystemKind::logistic4, SystemKind::rotation, SystemKind::identity,
                      SystemKind::example1}) {
      const System sys(SystemSpec::simple(kind, horizon));
      const auto pairs = kind == SystemKind::example1 ? example1_pairs(100, r.seed, horizon)
                                                      : sampled_pairs(sys, 100, r.seed);
      parts.push_back(lattice_harness(sys, pairs, horizon, Thresholds::for_system(sys), r.sequences));
    }
    const System shift(SystemSpec::simple(SystemKind::shift2, horizon));
    auto pairs = family_pairs(15, horizon);
    const auto extra = sampled_pairs(shift, 20, r.seed);
    pairs.insert(pairs.end(), extra.begin(), extra.end());
    parts.push_back(lattice_harness(shift, pairs, horizon, Thresholds::for_system(shift), r.sequences));
  }
  return merge_reports("lattice", parts);
}

/// Named sub-checks of a report for the suite summary.
inline json checks_of(const HarnessReport& rep) {
  json c = json::object();
  if (rep.harness == "example1") {
    bool a = true, b = true, cc = true, d = true;
    for (const auto& hc : rep.cases) {
      a = a && hc.data["A_parity_law"].get<bool>();
      b = b && hc.data["B_pass"].get<bool>();
      cc = cc && hc.data["C_pass"].get<bool>();
      d = d && hc.data["D_pass"].get<bool>();
    }
    c = {{"A_parity_law", a}, {"B_upper_density", b}, {"C_lower_density", cc}, {"D_dc2prime_not_dc1", d}};
  } else if (rep.harness == "theorem1") {
    std::uint64_t violations = 0;
    for (const auto& hc : rep.cases) violations += hc.data["counting_violations"].get<std::uint64_t>();
    c = {{"agreement_rate", rep.agreement_rate()}, {"counting_inequality", violations == 0}};
  }
  c["passed"] = rep.passed;
  return c;
}

}  // namespace detail

inline HarnessReport run_harness(const std::string& name, const Resolved& r) {
  if (name == "theorem1") return detail::run_theorem1(r);
  if (name == "theorem2") return detail::run_theorem2(r);
  if (name == "lemma3") return detail::run_lemma3(r);
  if (name == "example1") return detail::run_example1(r);
  if (name == "remark3") return detail::run_remark3(r);
  if (name == "rt") return detail::run_rt(r);
  if (name == "lattice") return detail::run_lattice(r);
  throw ConfigError("harness", "unknown harness '" + name + "'");
}

inline int cmd_suite(const Resolved& r, std::ostream& out) {
  if (r.harness.empty()) throw ConfigError("harness", "name at least one harness");
  for (const auto& h : r.harness)
    if (std::find(kHarnesses.begin(), kHarnesses.end(), h) == kHarnesses.end())
      throw ConfigError("harness", "unknown harness '" + h + "'");

  std::vector<HarnessReport> reports;
  for (const auto& h : r.harness) reports.push_back(run_harness(h, r));

  ensure_dir(r.out);
  json summary{{"config", r.config}, {"harnesses", json::object()}};
  bool all = true;
  for (const auto& rep : reports) {
    json doc = to_json(rep, r.timing);
    doc["config"] = r.config;
    write_text((r.out / (rep.harness + ".json")).string(), canonical_dump(doc));
    if (rep.harness == "theorem2") write_text((r.out / "theorem2.csv").string(), theorem2_csv(rep));
    summary["harnesses"][rep.harness] = {{"passed", rep.passed},
                                         {"vacuous", rep.vacuous},
                                         {"cases", rep.cases.size()},
                                         {"counterexamples", rep.counterexamples.size()},
                                         {"checks", detail::checks_of(rep)}};
    out << (rep.passed ? "PASS " : "FAIL ") << rep.harness << " (" << rep.cases.size() << " cases, "
        << rep.counterexamples.size() << " counterexamples)\n";
    all = all && rep.passed;
  }
  summary["passed"] = all;
  write_text((r.out / "summary.json").string(), canonical_dump(summary));
  return all ? kExitOk : kExitFailed;
}

// ---------------------------------------------------------------------------
// Entry point

inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"chaoskit: distributional chaos analysis of discrete dynamical systems"};
  app.require_subcommand(1);

  std::string config_path;
  std::string system;
  std::uint64_t horizon = 0, horizon_cap = 0, seed = 0, power = 0;
  double alpha = 0.0, t = 0.0;
  std::string out_dir, flag;
  std::vector<std::string> pairs, sequences, harness;
  std::vector<std::uint64_t> N;
  std::size_t family = 0, pair_count = 0;
  bool timing = false, no_witness = false, allow_noncompact = false;

  auto* systems = app.add_subcommand("systems", "list built-in systems");
  systems->add_subcommand("list", "list built-in systems");
  systems->require_subcommand(1);

  std::vector<CLI::Option*> opts;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file; flags override its values");
    sub->add_option("--system", system, "system name (tent, logistic4, rotation, shift2, example1, identity)");
    sub->add_option("--horizon", horizon, "number of iterates");
    sub->add_option("--horizon-cap,--horizon_cap", horizon_cap, "system horizon_cap (default: horizon)");
    sub->add_option("--alpha", alpha, "rotation number");
    sub->add_option("--power", power, "analyze iterate(system, power)");
    sub->add_option("--seed", seed, "random seed");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--pair", pairs, "X,Y (repeatable); shift2 points are binary parameter words");
    sub->add_option("--q,--sequence", sequences, "arith:STEP[:START] | explicit:I,J,... (repeatable)");
    sub->add_option("--family", family, "number of scrambled-family members");
    sub->add_option("--pair-count,--pair_count", pair_count, "number of sampled pairs");
    sub->add_flag("--timing", timing, "include runtimes in reports");
  };
  auto* analyze = app.add_subcommand("analyze", "distribution estimate and verdict for one pair");
  common(analyze);
  analyze->add_flag("--no-witness", no_witness, "skip witness-sequence construction");
  auto* classify = app.add_subcommand("classify", "verdicts for pairs or a scrambled-set search");
  common(classify);
  classify->add_option("--flag", flag, "chaos flag for the scrambled search");
  auto* suite = app.add_subcommand("suite", "run theorem harnesses");
  common(suite);
  suite->add_option("--harness", harness, "theorem1|theorem2|lemma3|example1|remark3|rt|lattice (repeatable)");
  suite->add_option("--N", N, "iterate powers (repeatable)");
  suite->add_option("--t", t, "scale for lemma3");
  suite->add_flag("--allow-noncompact", allow_noncompact, "permit theorem1 on example1");

  std::vector<const char*> argv{"chaoskit"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (systems->parsed()) return cmd_systems_list(out);
    CLI::App* sub = analyze->parsed() ? analyze : classify->parsed() ? classify : suite;

    json cfg = default_config();
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw ConfigError("config", "cannot read " + config_path);
      json file;
      try {
        file = json::parse(in);
      } catch (const json::exception& e) {
        throw ConfigError("config", std::string("invalid JSON: ") + e.what());
      }
      overlay_config(cfg, file);
    }
    auto given = [&](const char* name) { return sub->get_option_no_throw(name) && sub->count(name) > 0; };
    if (given("--horizon")) cfg["horizon"] = horizon;
    if (given("--seed")) cfg["seed"] = seed;
    if (given("--out")) cfg["out"] = out_dir;
    if (given("--pair")) cfg["pairs"] = pairs;
    if (given("--q")) cfg["sequences"] = sequences;
    if (given("--family")) cfg["family"] = family;
    if (given("--pair-count")) cfg["pair_count"] = pair_count;
    if (given("--timing")) cfg["timing"] = timing;
    if (given("--no-witness")) cfg["witness"] = !no_witness;
    if (given("--flag")) cfg["flag"] = flag;
    if (given("--harness")) cfg["harness"] = harness;
    if (given("--N")) cfg["N"] = N;
    if (given("--t")) cfg["t"] = t;
    if (given("--allow-noncompact")) cfg["allow_noncompact"] = allow_noncompact;
    if (given("--system") || given("--horizon-cap") || given("--alpha") || given("--power")) {
      json sys = cfg["system"].is_object() ? cfg["system"]
                 : cfg["system"].is_string() ? json{{"kind", cfg["system"]}}
                                             : json::object();
      if (given("--system")) sys = json{{"kind", system}};
      if (!sys.contains("kind")) throw ConfigError("system", "required");
      if (given("--horizon-cap")) sys["horizon_cap"] = horizon_cap;
      if (given("--alpha")) sys["alpha"] = alpha;
      if (given("--power")) sys = json{{"kind", "iterate"}, {"N", power}, {"base", sys}};
      cfg["system"] = sys;
    }

    const Resolved r = resolve(std::move(cfg));
    if (sub == analyze) return cmd_analyze(r, out);
    if (sub == classify) return cmd_classify(r, out);
    return cmd_suite(r, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const InsufficientData& e) {
    err << "error: insufficient data: " << e.what() << "\n";
    return kExitInsufficient;
  } catch (const HorizonExceeded& e) {
    err << "error: horizon: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace chaoskit::cli
