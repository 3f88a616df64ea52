#include "lobeq_cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <string_view>
#include <type_traits>
#include <variant>

namespace lobeq::cli {

ConfigError::ConfigError(std::string path, const std::string& what)
    : std::runtime_error(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}

namespace {

std::string join(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
}

void check_keys(const json& j, const std::string& path, std::initializer_list<std::string_view> allowed) {
  require_object(j, path);
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(join(path, key), "unknown key");
    }
  }
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(path, "expected a finite number");
  return d;
}

double number(const json& j, std::string_view key, const std::string& path) {
  if (!j.contains(key)) throw ConfigError(join(path, key), "missing required key");
  return as_number(j.at(std::string(key)), join(path, key));
}

double number_or(const json& j, std::string_view key, double fallback, const std::string& path) {
  return j.contains(key) ? as_number(j.at(std::string(key)), join(path, key)) : fallback;
}

std::int64_t integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ConfigError(path, "expected an integer");
  return v.get<std::int64_t>();
}

std::int64_t integer_or(const json& j, std::string_view key, std::int64_t fallback, const std::string& path) {
  return j.contains(key) ? integer(j.at(std::string(key)), join(path, key)) : fallback;
}

bool boolean_or(const json& j, std::string_view key, bool fallback, const std::string& path) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(std::string(key));
  if (!v.is_boolean()) throw ConfigError(join(path, key), "expected a boolean");
  return v.get<bool>();
}

std::string string(const json& j, std::string_view key, const std::string& path) {
  if (!j.contains(key)) throw ConfigError(join(path, key), "missing required key");
  const json& v = j.at(std::string(key));
  if (!v.is_string()) throw ConfigError(join(path, key), "expected a string");
  return v.get<std::string>();
}

std::vector<double> numbers(const json& v, const std::string& path) {
  if (!v.is_array()) throw ConfigError(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_number(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

// Wraps library validation errors with the config path.
template <class Fn>
auto guarded(const std::string& path, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(path, e.what());
  }
}

Liquidity parse_liquidity(const json& v, const std::string& path) {
  if (v.is_string() && v.get<std::string>() == "inf") return Liquidity::unbounded();
  return guarded(path, [&] { return Liquidity::finite(as_number(v, path)); });
}

json liquidity_json(const Liquidity& l) {
  if (l.is_unbounded()) return "inf";
  return l.value();
}

std::vector<Liquidity> parse_depths(const json& v, const std::string& path) {
  if (!v.is_array()) throw ConfigError(path, "expected an array of depths");
  std::vector<Liquidity> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(parse_liquidity(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

json depths_json(const std::vector<Liquidity>& v) {
  json out = json::array();
  for (const auto& l : v) out.push_back(liquidity_json(l));
  return out;
}

std::string_view variant_name(ShapeVariant v) {
  switch (v) {
    case ShapeVariant::Continuous: return "continuous";
    case ShapeVariant::Toxic: return "toxic";
    case ShapeVariant::Tick: return "tick";
    case ShapeVariant::Multi: return "multi";
  }
  return "?";
}

Reference parse_reference(const json& v, const std::string& path) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "micro") return Reference::Micro;
    if (s == "mid") return Reference::Mid;
    if (s == "touched") return Reference::Touched;
  }
  throw ConfigError(path, "expected one of micro, mid, touched");
}

TradeRole parse_role(const json& v, const std::string& path) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "aggressive") return TradeRole::Aggressive;
    if (s == "passive") return TradeRole::Passive;
  }
  throw ConfigError(path, "expected aggressive or passive");
}

ClusterSpec parse_cluster(const json& j, const std::string& path) {
  check_keys(j, path, {"metric", "side", "thresholds"});
  ClusterSpec spec;
  const auto metric = parse_cluster_metric(string(j, "metric", path));
  if (!metric) throw ConfigError(join(path, "metric"), "unknown clustering metric");
  spec.metric = *metric;
  spec.side = j.contains("side") ? parse_role(j.at("side"), join(path, "side"))
              : (spec.metric == ClusterMetric::TradeToTrade || spec.metric == ClusterMetric::VolumeRatio)
                  ? TradeRole::Aggressive
                  : TradeRole::Passive;
  if (!j.contains("thresholds")) throw ConfigError(join(path, "thresholds"), "missing required key");
  spec.thresholds = numbers(j.at("thresholds"), join(path, "thresholds"));
  guarded(path, [&] { spec.validate(); });
  return spec;
}

SimConfig parse_simulate(const json& j, const std::string& path, const ModelParams& model, std::uint64_t seed) {
  check_keys(j, path, {"n_events", "record_log", "offset_mode", "n_levels", "probe_grid", "book", "log"});
  SimConfig c{.params = model};
  c.seed = seed;
  if (!j.contains("n_events")) throw ConfigError(join(path, "n_events"), "missing required key");
  const std::int64_t n = integer(j.at("n_events"), join(path, "n_events"));
  if (n < 0) throw ConfigError(join(path, "n_events"), "must be nonnegative");
  c.n_events = static_cast<std::uint64_t>(n);
  c.record_log = boolean_or(j, "record_log", false, path);
  const std::string mode = j.contains("offset_mode") ? string(j, "offset_mode", path) : "fixed";
  if (mode == "fixed") {
    c.offset_mode = OffsetMode::Fixed;
  } else if (mode == "tracking") {
    c.offset_mode = OffsetMode::Tracking;
  } else {
    throw ConfigError(join(path, "offset_mode"), "expected fixed or tracking");
  }
  c.n_levels = static_cast<int>(integer_or(j, "n_levels", c.n_levels, path));
  if (j.contains("probe_grid")) c.probe_grid = parse_grid(j.at("probe_grid"), join(path, "probe_grid"));
  if (j.contains("book")) {
    const json& b = j.at("book");
    const std::string bp = join(path, "book");
    if (b.is_string() && b.get<std::string>() == "equilibrium") {
      c.book = EquilibriumBook{};
    } else {
      check_keys(b, bp, {"grid", "informed", "noise"});
      BookShape shape;
      shape.grid = numbers(b.at("grid"), join(bp, "grid"));
      if (!b.contains("informed") || !b.contains("noise")) throw ConfigError(bp, "needs grid, informed and noise");
      shape.informed = parse_depths(b.at("informed"), join(bp, "informed"));
      shape.noise = parse_depths(b.at("noise"), join(bp, "noise"));
      c.book = shape;
    }
  }
  if (j.contains("log")) {
    const json& l = j.at("log");
    const std::string lp = join(path, "log");
    check_keys(l, lp, {"p0", "qty_scale", "event_rate", "imm_latency_ns", "nmm_latency_ns"});
    c.log.p0 = number_or(l, "p0", c.log.p0, lp);
    c.log.qty_scale = number_or(l, "qty_scale", c.log.qty_scale, lp);
    c.log.event_rate = number_or(l, "event_rate", c.log.event_rate, lp);
    c.log.imm_latency_ns = integer_or(l, "imm_latency_ns", c.log.imm_latency_ns, lp);
    c.log.nmm_latency_ns = integer_or(l, "nmm_latency_ns", c.log.nmm_latency_ns, lp);
  }
  guarded(path, [&] { c.validate(); });
  return c;
}

SignatureConfig parse_signature(const json& j, const std::string& path) {
  check_keys(j, path, {"input", "tick", "horizons_ns", "references", "clusters", "by_label", "bootstrap"});
  SignatureConfig c;
  c.input = string(j, "input", path);
  if (j.contains("tick")) {
    c.tick = number(j, "tick", path);
    if (!(*c.tick > 0.0)) throw ConfigError(join(path, "tick"), "must be positive");
  }
  if (!j.contains("horizons_ns")) throw ConfigError(join(path, "horizons_ns"), "missing required key");
  for (double h : parse_grid(j.at("horizons_ns"), join(path, "horizons_ns"))) {
    if (h < 0.0) throw ConfigError(join(path, "horizons_ns"), "horizons must be nonnegative");
    c.horizons_ns.push_back(std::llround(h));
  }
  if (j.contains("references")) {
    const json& r = j.at("references");
    if (!r.is_array() || r.empty()) throw ConfigError(join(path, "references"), "expected a nonempty array");
    c.references.clear();
    for (std::size_t i = 0; i < r.size(); ++i) {
      c.references.push_back(parse_reference(r[i], join(path, "references") + "[" + std::to_string(i) + "]"));
    }
  }
  if (j.contains("clusters")) {
    const json& cl = j.at("clusters");
    if (!cl.is_array()) throw ConfigError(join(path, "clusters"), "expected an array");
    for (std::size_t i = 0; i < cl.size(); ++i) {
      c.clusters.push_back(parse_cluster(cl[i], join(path, "clusters") + "[" + std::to_string(i) + "]"));
    }
  }
  c.by_label = boolean_or(j, "by_label", c.by_label, path);
  if (j.contains("bootstrap")) {
    const json& b = j.at("bootstrap");
    const std::string bp = join(path, "bootstrap");
    check_keys(b, bp, {"n", "seed"});
    c.bootstrap.n_resamples = static_cast<int>(integer_or(b, "n", c.bootstrap.n_resamples, bp));
    c.bootstrap.seed = static_cast<std::uint64_t>(integer_or(b, "seed", 0, bp));
    if (c.bootstrap.n_resamples < 0) throw ConfigError(join(bp, "n"), "must be nonnegative");
  }
  return c;
}

SweepConfig parse_sweep(const json& j, const std::string& path) {
  check_keys(j, path, {"axes", "probes", "threads"});
  SweepConfig c;
  if (j.contains("axes")) {
    const json& a = j.at("axes");
    const std::string ap = join(path, "axes");
    check_keys(a, ap, {"r", "f", "theta", "rho", "offset_d"});
    auto axis = [&](std::string_view key, std::vector<double>& dst) {
      if (a.contains(key)) dst = parse_grid(a.at(std::string(key)), join(ap, key));
    };
    axis("r", c.r);
    axis("f", c.f);
    axis("theta", c.theta);
    axis("rho", c.rho);
    axis("offset_d", c.offset_d);
  }
  if (j.contains("probes")) c.probes = parse_grid(j.at("probes"), join(path, "probes"));
  c.threads = static_cast<int>(integer_or(j, "threads", 0, path));
  if (c.threads < 0) throw ConfigError(join(path, "threads"), "must be nonnegative");
  return c;
}

ShapeConfig parse_shape(const json& j, const std::string& path) {
  check_keys(j, path, {"variant", "grid", "n_levels"});
  ShapeConfig c;
  const std::string v = j.contains("variant") ? string(j, "variant", path) : "continuous";
  bool known = false;
  for (ShapeVariant s : {ShapeVariant::Continuous, ShapeVariant::Toxic, ShapeVariant::Tick, ShapeVariant::Multi}) {
    if (v == variant_name(s)) {
      c.variant = s;
      known = true;
    }
  }
  if (!known) throw ConfigError(join(path, "variant"), "expected continuous, toxic, tick or multi");
  if (j.contains("grid")) c.grid = parse_grid(j.at("grid"), join(path, "grid"));
  c.n_levels = static_cast<int>(integer_or(j, "n_levels", c.n_levels, path));
  if (c.variant == ShapeVariant::Tick) {
    if (c.n_levels < 1) throw ConfigError(join(path, "n_levels"), "must be positive");
  } else if (c.grid.empty()) {
    throw ConfigError(join(path, "grid"), "needs at least one price distance");
  }
  return c;
}

}  // namespace

// ------------------------------------------------------------------ laws

std::vector<double> parse_grid(const json& j, const std::string& path) {
  if (j.is_array()) return numbers(j, path);
  check_keys(j, path, {"from", "to", "n"});
  const double from = number(j, "from", path);
  const double to = number(j, "to", path);
  if (!j.contains("n")) throw ConfigError(join(path, "n"), "missing required key");
  const std::int64_t n = integer(j.at("n"), join(path, "n"));
  if (n < 1) throw ConfigError(join(path, "n"), "must be positive");
  if (n == 1) return {from};
  std::vector<double> out(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = from + (to - from) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  out.back() = to;
  return out;
}

JumpLaw parse_jump(const json& j, const std::string& path) {
  require_object(j, path);
  const std::string type = string(j, "type", path);
  return guarded(path, [&] {
    if (type == "pareto") {
      check_keys(j, path, {"type", "shape", "scale"});
      return JumpLaw::pareto(number(j, "shape", path), number(j, "scale", path));
    }
    if (type == "exponential") {
      check_keys(j, path, {"type", "rate"});
      return JumpLaw::exponential(number(j, "rate", path));
    }
    if (type == "point_mass") {
      check_keys(j, path, {"type", "value"});
      return JumpLaw::point_mass(number(j, "value", path));
    }
    throw ConfigError(join(path, "type"), "unknown jump law '" + type + "'");
  });
}

VolumeLaw parse_volume(const json& j, const std::string& path) {
  require_object(j, path);
  const std::string type = string(j, "type", path);
  return guarded(path, [&] {
    if (type == "normal") {
      check_keys(j, path, {"type", "sigma", "median"});
      return VolumeLaw::normal(number(j, "sigma", path), number_or(j, "median", 0.0, path));
    }
    if (type == "laplace") {
      check_keys(j, path, {"type", "b", "median"});
      return VolumeLaw::laplace(number(j, "b", path), number_or(j, "median", 0.0, path));
    }
    throw ConfigError(join(path, "type"), "unknown volume law '" + type + "'");
  });
}

ModelParams parse_model(const json& j, const std::string& path) {
  check_keys(j, path, {"r", "f", "jump", "volume", "lambda_i", "lambda_u", "theta", "rho", "tick", "offset_d"});
  if (!j.contains("jump")) throw ConfigError(join(path, "jump"), "missing required key");
  if (!j.contains("volume")) throw ConfigError(join(path, "volume"), "missing required key");
  ModelParams p{0.0, 0.0, parse_jump(j.at("jump"), join(path, "jump")),
                parse_volume(j.at("volume"), join(path, "volume"))};
  p.lambda_i = number_or(j, "lambda_i", 0.0, path);
  p.lambda_u = number_or(j, "lambda_u", 0.0, path);
  if (j.contains("r")) {
    p.r = number(j, "r", path);
  } else if (p.lambda_i > 0.0 && p.lambda_u > 0.0) {
    p.r = p.lambda_i / (p.lambda_i + p.lambda_u);
  } else {
    throw ConfigError(join(path, "r"), "missing; give r or both intensities");
  }
  p.f = number(j, "f", path);
  p.theta = number_or(j, "theta", 0.0, path);
  p.rho = number_or(j, "rho", 0.0, path);
  p.tick = number_or(j, "tick", 0.0, path);
  p.offset_d = number_or(j, "offset_d", 0.0, path);
  guarded(path, [&] { p.validate(); });
  return p;
}

MultiSourceParams parse_multi(const json& j, const std::string& path) {
  check_keys(j, path, {"sources", "volume"});
  if (!j.contains("sources") || !j.at("sources").is_array()) throw ConfigError(join(path, "sources"), "expected an array");
  if (!j.contains("volume")) throw ConfigError(join(path, "volume"), "missing required key");
  MultiSourceParams mp{{}, parse_volume(j.at("volume"), join(path, "volume"))};
  const json& src = j.at("sources");
  for (std::size_t i = 0; i < src.size(); ++i) {
    const std::string sp = join(path, "sources") + "[" + std::to_string(i) + "]";
    check_keys(src[i], sp, {"r", "f", "jump"});
    if (!src[i].contains("jump")) throw ConfigError(join(sp, "jump"), "missing required key");
    mp.sources.push_back({number(src[i], "r", sp), number(src[i], "f", sp), parse_jump(src[i].at("jump"), join(sp, "jump"))});
  }
  guarded(path, [&] { mp.validate(); });
  return mp;
}

json to_json(const JumpLaw& law) {
  return std::visit(
      [](const auto& k) -> json {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Pareto>) return {{"type", "pareto"}, {"shape", k.shape}, {"scale", k.scale}};
        if constexpr (std::is_same_v<T, Exponential>) return {{"type", "exponential"}, {"rate", k.rate}};
        if constexpr (std::is_same_v<T, PointMass>) return {{"type", "point_mass"}, {"value", k.value}};
      },
      law.kind());
}

json to_json(const VolumeLaw& law) {
  return std::visit(
      [](const auto& k) -> json {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, NormalZeroMedian>) return {{"type", "normal"}, {"sigma", k.sigma}};
        if constexpr (std::is_same_v<T, LaplaceZeroMedian>) return {{"type", "laplace"}, {"b", k.b}};
      },
      law.kind());
}

json to_json(const ModelParams& p) {
  return {{"r", p.r},           {"f", p.f},         {"jump", to_json(p.jump)}, {"volume", to_json(p.volume)},
          {"lambda_i", p.lambda_i}, {"lambda_u", p.lambda_u}, {"theta", p.theta}, {"rho", p.rho},
          {"tick", p.tick},     {"offset_d", p.offset_d}};
}

json to_json(const MultiSourceParams& mp) {
  json sources = json::array();
  for (const auto& s : mp.sources) sources.push_back({{"r", s.r}, {"f", s.f}, {"jump", to_json(s.jump)}});
  return {{"sources", sources}, {"volume", to_json(mp.volume)}};
}

// ---------------------------------------------------------------- config

RunConfig parse_config(const json& doc, const std::string& command) {
  check_keys(doc, "", {"seed", "model", "multi", "shape", "simulate", "signature", "sweep"});
  RunConfig cfg;
  if (doc.contains("seed")) {
    const std::int64_t s = integer(doc.at("seed"), "seed");
    if (s < 0) throw ConfigError("seed", "must be nonnegative");
    cfg.seed = static_cast<std::uint64_t>(s);
  }
  if (doc.contains("model")) cfg.model = parse_model(doc.at("model"), "model");
  if (doc.contains("multi")) cfg.multi = parse_multi(doc.at("multi"), "multi");

  auto need_model = [&] {
    if (!cfg.model) throw ConfigError("model", "missing required block for '" + command + "'");
  };
  if (command == "shape") {
    if (!doc.contains("shape")) throw ConfigError("shape", "missing required block");
    cfg.shape = parse_shape(doc.at("shape"), "shape");
    if (cfg.shape.variant == ShapeVariant::Multi) {
      if (!cfg.multi) throw ConfigError("multi", "missing required block for the multi variant");
    } else {
      need_model();
    }
  } else if (command == "spread") {
    need_model();
  } else if (command == "simulate") {
    need_model();
    if (!doc.contains("simulate")) throw ConfigError("simulate", "missing required block");
    cfg.simulate = parse_simulate(doc.at("simulate"), "simulate", *cfg.model, cfg.seed);
  } else if (command == "signature") {
    if (!doc.contains("signature")) throw ConfigError("signature", "missing required block");
    cfg.signature = parse_signature(doc.at("signature"), "signature");
  } else if (command == "sweep") {
    need_model();
    cfg.sweep = parse_sweep(doc.contains("sweep") ? doc.at("sweep") : json::object(), "sweep");
  } else {
    throw ConfigError("", "unknown command '" + command + "'");
  }
  return cfg;
}

json to_json(const RunConfig& cfg, const std::string& command) {
  json out;
  out["seed"] = cfg.seed;
  if (cfg.model) out["model"] = to_json(*cfg.model);
  if (cfg.multi) out["multi"] = to_json(*cfg.multi);
  if (command == "shape") {
    json s = {{"variant", variant_name(cfg.shape.variant)}};
    if (cfg.shape.variant == ShapeVariant::Tick) {
      s["n_levels"] = cfg.shape.n_levels;
    } else {
      s["grid"] = cfg.shape.grid;
    }
    out["shape"] = s;
  }
  if (cfg.simulate) {
    const SimConfig& c = *cfg.simulate;
    json s = {{"n_events", c.n_events},
              {"record_log", c.record_log},
              {"offset_mode", c.offset_mode == OffsetMode::Fixed ? "fixed" : "tracking"},
              {"n_levels", c.n_levels},
              {"probe_grid", c.probe_grid},
              {"log",
               {{"p0", c.log.p0},
                {"qty_scale", c.log.qty_scale},
                {"event_rate", c.log.event_rate},
                {"imm_latency_ns", c.log.imm_latency_ns},
                {"nmm_latency_ns", c.log.nmm_latency_ns}}}};
    if (const auto* b = std::get_if<BookShape>(&c.book)) {
      s["book"] = {{"grid", b->grid}, {"informed", depths_json(b->informed)}, {"noise", depths_json(b->noise)}};
    } else {
      s["book"] = "equilibrium";
    }
    out["simulate"] = s;
  }
  if (cfg.signature) {
    const SignatureConfig& c = *cfg.signature;
    json refs = json::array();
    for (Reference r : c.references) refs.push_back(to_string(r));
    json clusters = json::array();
    for (const ClusterSpec& spec : c.clusters) {
      clusters.push_back(
          {{"metric", to_string(spec.metric)}, {"side", to_string(spec.side)}, {"thresholds", spec.thresholds}});
    }
    json s = {{"input", c.input},
              {"horizons_ns", c.horizons_ns},
              {"references", refs},
              {"clusters", clusters},
              {"by_label", c.by_label},
              {"bootstrap", {{"n", c.bootstrap.n_resamples}, {"seed", c.bootstrap.seed}}}};
    if (c.tick) s["tick"] = *c.tick;
    out["signature"] = s;
  }
  if (cfg.sweep) {
    const SweepConfig& c = *cfg.sweep;
    json axes = json::object();
    if (!c.r.empty()) axes["r"] = c.r;
    if (!c.f.empty()) axes["f"] = c.f;
    if (!c.theta.empty()) axes["theta"] = c.theta;
    if (!c.rho.empty()) axes["rho"] = c.rho;
    if (!c.offset_d.empty()) axes["offset_d"] = c.offset_d;
    out["sweep"] = {{"axes", axes}, {"probes", c.probes}, {"threads", c.threads}};
  }
  return out;
}

}  // namespace lobeq::cli
