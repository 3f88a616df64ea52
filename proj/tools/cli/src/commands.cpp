#include "lobeq_cli/commands.hpp"

#include "lobeq/mbo.hpp"

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

namespace lobeq::cli {

namespace fs = std::filesystem;

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", v);
}

namespace {

std::string depth_text(const Liquidity& l) { return format_number(l.value()); }

json depth_json(const Liquidity& l) {
  if (l.is_unbounded()) return "inf";
  return l.value();
}

json depths_json(const std::vector<Liquidity>& v) {
  json out = json::array();
  for (const auto& l : v) out.push_back(depth_json(l));
  return out;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void write_json(const fs::path& path, const json& doc) {
  auto out = open_out(path);
  out << doc.dump(2) << '\n';
}

json spread_json(const SpreadSolution& s) {
  json out = {{"regime", s.regime == SpreadRegime::Finite ? "finite" : "zero_spread"},
              {"phi", s.phi},
              {"mu", s.mu},
              {"phi_theta", s.phi_theta},
              {"theta_bar", s.theta_bar},
              {"k_d", nullptr},
              {"spread_tick", nullptr},
              {"solver_iters", s.solver_iters},
              {"residual", s.residual}};
  if (s.k_d) out["k_d"] = *s.k_d;
  if (s.spread_tick) out["spread_tick"] = *s.spread_tick;
  return out;
}

SpreadSolution solve_spread(const ModelParams& p) {
  if (p.tick > 0.0) return spread_tick(p);
  return spread_toxic(p);
}

const char* kSpreadHeader = "regime,phi,mu,phi_theta,theta_bar,k_d,spread_tick,solver_iters,residual";

std::string spread_row(const SpreadSolution& s) {
  return fmt::format("{},{},{},{},{},{},{},{},{}", s.regime == SpreadRegime::Finite ? "finite" : "zero_spread",
                     format_number(s.phi), format_number(s.mu), format_number(s.phi_theta),
                     format_number(s.theta_bar), s.k_d ? std::to_string(*s.k_d) : "",
                     s.spread_tick ? format_number(*s.spread_tick) : "", s.solver_iters, format_number(s.residual));
}

int residual_exit(double residual) {
  if (residual > kResidualTolerance) {
    spdlog::error("solver residual {} exceeds {}", residual, kResidualTolerance);
    return kResidualFailure;
  }
  return kOk;
}

}  // namespace

// ------------------------------------------------------------------ shape

CommandResult cmd_shape(const RunConfig& cfg, const fs::path& out) {
  CommandResult result;
  const ShapeConfig& sc = cfg.shape;
  BookShape shape;
  std::optional<SpreadSolution> spread;
  switch (sc.variant) {
    case ShapeVariant::Continuous: shape = shape_continuous(*cfg.model, sc.grid); break;
    case ShapeVariant::Toxic: shape = shape_toxic(*cfg.model, sc.grid); break;
    case ShapeVariant::Tick:
      shape = shape_tick(*cfg.model, sc.n_levels);
      spread = spread_tick(*cfg.model);
      break;
    case ShapeVariant::Multi: shape = shape_multi(*cfg.multi, sc.grid); break;
  }

  const fs::path csv = out / "shape.csv";
  {
    auto f = open_out(csv);
    const bool tick = sc.variant == ShapeVariant::Tick;
    if (tick) f << "level,";
    f << "x";
    for (std::size_t k = 0; k < shape.sources.size(); ++k) f << ",L_" << k;
    f << ",L_i,L_u,L_eff";
    if (tick) f << ",l_level";
    f << '\n';
    for (std::size_t i = 0; i < shape.size(); ++i) {
      if (tick) f << (i + 1) << ',';
      f << format_number(shape.grid[i]);
      for (const auto& src : shape.sources) f << ',' << depth_text(src[i]);
      f << ',' << depth_text(shape.informed[i]) << ',' << depth_text(shape.noise[i]) << ','
        << depth_text(shape.effective[i]);
      if (tick) f << ',' << depth_text(shape.per_level[i]);
      f << '\n';
    }
  }
  json doc = {{"grid", shape.grid},
              {"informed", depths_json(shape.informed)},
              {"noise", depths_json(shape.noise)},
              {"effective", depths_json(shape.effective)}};
  if (!shape.per_level.empty()) doc["per_level"] = depths_json(shape.per_level);
  if (!shape.sources.empty()) {
    doc["sources"] = json::array();
    for (const auto& src : shape.sources) doc["sources"].push_back(depths_json(src));
  }
  if (spread) {
    doc["spread"] = spread_json(*spread);
    result.worst_residual = spread->residual;
    result.exit_code = residual_exit(spread->residual);
  }
  write_json(out / "shape.json", doc);
  result.outputs = {csv, out / "shape.json"};
  return result;
}

// ----------------------------------------------------------------- spread

CommandResult cmd_spread(const RunConfig& cfg, const fs::path& out) {
  CommandResult result;
  const SpreadSolution s = solve_spread(*cfg.model);
  write_json(out / "spread.json", spread_json(s));
  {
    auto f = open_out(out / "spread.csv");
    f << kSpreadHeader << '\n' << spread_row(s) << '\n';
  }
  result.outputs = {out / "spread.json", out / "spread.csv"};
  result.worst_residual = s.residual;
  result.exit_code = residual_exit(s.residual);
  spdlog::info("phi = {}, mu = {}, phi_theta = {}", format_number(s.phi), format_number(s.mu),
               format_number(s.phi_theta));
  return result;
}

// --------------------------------------------------------------- simulate

CommandResult cmd_simulate(const RunConfig& cfg, const fs::path& out) {
  CommandResult result;
  const SimResult sim = run(*cfg.simulate);
  {
    auto f = open_out(out / "pnl.csv");
    f << "maker_type,level,n_fills,mean_gain,std_err\n";
    for (const LevelPnl& row : sim.pnl) {
      f << to_string(row.maker) << ',' << row.level << ',' << row.n_fills << ',' << format_number(row.mean_gain) << ','
        << format_number(row.std_err) << '\n';
    }
  }
  json levels = json::array();
  for (const LevelPnl& row : sim.pnl) {
    levels.push_back({{"maker_type", to_string(row.maker)},
                      {"level", row.level},
                      {"distance", row.distance},
                      {"n_fills", row.n_fills},
                      {"mean_gain", row.mean_gain},
                      {"std_err", row.std_err},
                      {"populated", row.populated}});
  }
  const SimSummary& s = sim.summary;
  write_json(out / "summary.json", {{"n_events", s.n_events},
                                    {"n_jumps", s.n_jumps},
                                    {"n_it_wins", s.n_it_wins},
                                    {"n_noise", s.n_noise},
                                    {"jump_fraction", s.jump_fraction()},
                                    {"race_win_fraction", s.race_win_fraction()},
                                    {"sign_persistence", s.sign_persistence()},
                                    {"total_executed", s.total_executed},
                                    {"levels", levels}});
  result.outputs = {out / "pnl.csv", out / "summary.json"};
  if (sim.log) {
    auto f = open_out(out / "mbo.csv");
    write_mbo(f, *sim.log);
    result.outputs.push_back(out / "mbo.csv");
  }
  spdlog::info("simulated {} events ({} jumps)", s.n_events, s.n_jumps);
  return result;
}

// -------------------------------------------------------------- signature

CommandResult cmd_signature(const RunConfig& cfg, const fs::path& out) {
  CommandResult result;
  const SignatureConfig& sc = *cfg.signature;
  std::ifstream in(sc.input, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open input log " + sc.input);
  MboParseOptions opts;
  opts.tick = sc.tick;
  const std::vector<MboEvent> events = parse_mbo(in, opts);
  if (events.empty()) throw std::runtime_error("input log " + sc.input + " has no events");
  const Reconstruction rec = reconstruct_lifecycles(events);
  const TradeTape tape = build_trade_records(events, rec);
  spdlog::info("{} events, {} aggressive trades, {} passive fills", events.size(), tape.aggressive.size(),
               tape.passive.size());

  for (Reference refkind : sc.references) {
    const ReferenceSeries ref(events, rec, refkind);
    for (std::size_t c = 0; c < sc.clusters.size(); ++c) {
      const ClusterSpec& spec = sc.clusters[c];
      const SignatureCurve curve = cluster_signatures(tape, spec, sc.horizons_ns, ref, sc.bootstrap);
      const fs::path path =
          out / fmt::format("signature_{}_{}_{}.csv", c, to_string(spec.metric), to_string(refkind));
      auto f = open_out(path);
      f << "horizon,cluster_id,st_value,n_trades\n";
      for (std::size_t h = 0; h < curve.horizons.size(); ++h) {
        for (std::size_t k = 0; k < curve.counts.size(); ++k) {
          f << curve.horizons[h] << ',' << k << ',' << format_number(curve.values[k][h].value) << ','
            << curve.counts[k] << '\n';
        }
      }
      result.outputs.push_back(path);
    }
    if (sc.by_label) {
      const fs::path path = out / fmt::format("signature_labels_{}.csv", to_string(refkind));
      auto f = open_out(path);
      f << "horizon,role,label,st_value,std_err,n_trades\n";
      const std::pair<TradeRole, Participant> groups[] = {{TradeRole::Aggressive, Participant::IT},
                                                          {TradeRole::Aggressive, Participant::NT},
                                                          {TradeRole::Passive, Participant::IMM},
                                                          {TradeRole::Passive, Participant::NMM}};
      for (std::size_t g = 0; g < std::size(groups); ++g) {
        const auto [role, label] = groups[g];
        const auto trades = with_reference(select_label(tape, role, label), sc.horizons_ns, ref);
        if (trades.empty()) continue;
        BootstrapOptions boot = sc.bootstrap;
        boot.seed += g;
        const auto series = signature_series(trades, sc.horizons_ns, default_eps(role), ref, boot);
        for (std::size_t h = 0; h < series.size(); ++h) {
          f << sc.horizons_ns[h] << ',' << to_string(role) << ',' << to_string(label) << ','
            << format_number(series[h].value) << ',' << format_number(series[h].std_err) << ',' << trades.size()
            << '\n';
        }
      }
      result.outputs.push_back(path);
    }
  }
  return result;
}

// ------------------------------------------------------------------ sweep

CommandResult cmd_sweep(const RunConfig& cfg, const fs::path& out) {
  CommandResult result;
  const SweepConfig& sw = *cfg.sweep;
  const ModelParams& base = *cfg.model;
  auto axis = [](const std::vector<double>& v, double fallback) { return v.empty() ? std::vector<double>{fallback} : v; };
  const auto rs = axis(sw.r, base.r);
  const auto fs_ = axis(sw.f, base.f);
  const auto thetas = axis(sw.theta, base.theta);
  const auto rhos = axis(sw.rho, base.rho);
  const auto ds = axis(sw.offset_d, base.offset_d);

  // Grid order: r outermost, offset_d innermost.
  std::vector<ModelParams> cells;
  for (double r : rs)
    for (double f : fs_)
      for (double th : thetas)
        for (double rho : rhos)
          for (double d : ds) {
            ModelParams p = base;
            p.r = r;
            p.f = f;
            p.theta = th;
            p.rho = rho;
            p.offset_d = d;
            p.lambda_i = p.lambda_u = 0.0;  // r is swept directly
            cells.push_back(p);
          }

  struct Cell {
    SpreadSolution spread;
    BookShape shape;
    std::exception_ptr error;
  };
  std::vector<Cell> rows(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      try {
        rows[i].spread = solve_spread(cells[i]);
        if (!sw.probes.empty()) rows[i].shape = shape_toxic(cells[i], sw.probes);
      } catch (...) {
        rows[i].error = std::current_exception();
      }
    }
  };
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const auto n_threads = static_cast<std::size_t>(sw.threads > 0 ? static_cast<unsigned>(sw.threads) : hw);
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < std::min(n_threads, cells.size()); ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].error) {
      try {
        std::rethrow_exception(rows[i].error);
      } catch (const std::exception& e) {
        throw std::runtime_error(fmt::format("sweep cell {}: {}", i, e.what()));
      }
    }
  }

  const fs::path path = out / "sweep.csv";
  auto f = open_out(path);
  f << "r,f,theta,rho,offset_d," << kSpreadHeader;
  for (double x : sw.probes) f << ",L_i@" << format_number(x);
  for (double x : sw.probes) f << ",L_u@" << format_number(x);
  f << '\n';
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const ModelParams& p = cells[i];
    f << format_number(p.r) << ',' << format_number(p.f) << ',' << format_number(p.theta) << ','
      << format_number(p.rho) << ',' << format_number(p.offset_d) << ',' << spread_row(rows[i].spread);
    for (const auto& l : rows[i].shape.informed) f << ',' << depth_text(l);
    for (const auto& l : rows[i].shape.noise) f << ',' << depth_text(l);
    f << '\n';
    result.worst_residual = std::max(result.worst_residual, rows[i].spread.residual);
  }
  result.outputs = {path};
  result.exit_code = residual_exit(result.worst_residual);
  spdlog::info("swept {} cells", cells.size());
  return result;
}

// -------------------------------------------------------------------- run

int run_command(const std::string& command, json doc, const fs::path& out, std::optional<std::uint64_t> seed_override) {
  RunConfig cfg;
  try {
    if (!doc.is_object()) throw ConfigError("", "configuration must be a JSON object");
    if (seed_override) doc["seed"] = *seed_override;
    cfg = parse_config(doc, command);
  } catch (const ConfigError& e) {
    spdlog::error("invalid configuration: {}", e.what());
    return kConfigError;
  }

  CommandResult result;
  std::string error;
  try {
    fs::create_directories(out);
    if (command == "shape") {
      result = cmd_shape(cfg, out);
    } else if (command == "spread") {
      result = cmd_spread(cfg, out);
    } else if (command == "simulate") {
      result = cmd_simulate(cfg, out);
    } else if (command == "signature") {
      result = cmd_signature(cfg, out);
    } else {
      result = cmd_sweep(cfg, out);
    }
  } catch (const std::invalid_argument& e) {
    error = e.what();
    result.exit_code = kConfigError;
  } catch (const std::exception& e) {
    error = e.what();
    result.exit_code = kRuntimeError;
  }
  if (!error.empty()) spdlog::error("{} failed: {}", command, error);

  json outputs = json::array();
  for (const auto& p : result.outputs) outputs.push_back(p.filename().string());
  json manifest = {{"command", command},
                   {"version", "0.1.0"},
                   {"config", to_json(cfg, command)},
                   {"outputs", outputs},
                   {"exit_code", result.exit_code},
                   {"worst_residual", result.worst_residual}};
  if (!error.empty()) manifest["error"] = error;
  try {
    write_json(out / "manifest.json", manifest);
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kRuntimeError;
  }
  return result.exit_code;
}

}  // namespace lobeq::cli
