// Command-line front end: emits plot-ready CSV (and transcript JSON) for the
// game values, key-rate sweeps, positivity region, protocol simulation, and
// ingested bound curves. Identical config + seed gives byte-identical output.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "nlgqkd/entropy.hpp"
#include "nlgqkd/games.hpp"
#include "nlgqkd/keyrate.hpp"
#include "nlgqkd/parallel.hpp"
#include "nlgqkd/protocol.hpp"

namespace {

using namespace nlgqkd;

constexpr const char* kVersion = "nlgqkd 1.0";

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file: " + out_path);
  f << content;
}

games::GameSpec resolve_game(const std::string& id) {
  if (id == "msg") return games::GameSpec::msg();
  if (id == "chsh") return games::GameSpec::chsh();
  std::string path = id.rfind("custom:", 0) == 0 ? id.substr(7) : id;
  return games::GameSpec::from_json_file(path);
}

// Honest strategy for the named game, or a user-supplied one.
games::QuantumStrategy resolve_strategy(const std::string& game_id,
                                        const std::string& strategy_path) {
  if (!strategy_path.empty()) return games::QuantumStrategy::from_json_file(strategy_path);
  if (game_id == "msg") return games::msg_honest_strategy();
  if (game_id == "chsh") return games::chsh_honest_strategy();
  throw std::runtime_error("custom game needs --strategy for quantum values");
}

keyrate::BoundSource resolve_bound(const std::string& table, double omega3,
                                   entropy::BoundCurve& storage) {
  keyrate::BoundSource src;
  if (!table.empty()) {
    std::string path = table.rfind("table:", 0) == 0 ? table.substr(6) : table;
    storage = entropy::load_curve_csv(path);
    src.use_curve = true;
    src.curve = &storage;
  } else {
    src.omega3 = omega3;
  }
  return src;
}

// Pre-parse --config <file.json>; inject "key": value pairs as --key flags
// unless the flag is already given on the command line.
std::vector<std::string> merge_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string cfg_path;
  for (size_t i = 0; i + 1 < args.size(); ++i)
    if (args[i] == "--config") cfg_path = args[i + 1];
  if (cfg_path.empty()) return args;
  std::ifstream f(cfg_path);
  if (!f) throw std::runtime_error("cannot open config file: " + cfg_path);
  nlohmann::json j = nlohmann::json::parse(f);
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string flag = "--" + it.key();
    bool present = false;
    for (const auto& a : args)
      if (a == flag) present = true;
    if (present) continue;
    args.push_back(flag);
    if (it.value().is_array())
      for (const auto& v : it.value())
        args.push_back(v.is_string() ? v.get<std::string>() : v.dump());
    else if (it.value().is_boolean()) {
      if (!it.value().get<bool>()) args.pop_back();
    } else
      args.push_back(it.value().is_string() ? it.value().get<std::string>() : it.value().dump());
  }
  return args;
}

std::string join_list(const std::vector<double>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + fmt(v[i]);
  return s;
}

// ---------------------------------------------------------------- game-value

int cmd_game_value(const std::string& game_id, const std::string& strategy_path,
                   const std::vector<double>& qs, const std::string& out) {
  games::GameSpec game = resolve_game(game_id);
  game.validate();
  games::GameValue cv = games::classical_value(game);

  bool have_quantum = true;
  games::QuantumStrategy base;
  try {
    base = resolve_strategy(game_id, strategy_path);
  } catch (const std::runtime_error&) {
    have_quantum = false;
  }

  std::ostringstream ss;
  ss << "# " << kVersion << " config: command=game-value game=" << game_id
     << " strategy=" << (strategy_path.empty() ? "-" : strategy_path) << " q=" << join_list(qs)
     << "\n";
  ss << "game,q,classical_num,classical_den,classical_value,quantum_value\n";
  for (double q : qs) {
    ss << game.name << "," << fmt(q) << ",";
    if (cv.exact) ss << cv.rational.num << "," << cv.rational.den;
    else ss << ",";
    ss << "," << fmt(cv.v) << ",";
    if (have_quantum) {
      games::QuantumStrategy s =
          q > 0.0 ? games::apply_depolarizing(base, q, base.two_pair_structure) : base;
      ss << fmt(games::quantum_win_prob(game, s));
    }
    ss << "\n";
  }
  emit(out, ss.str());
  return 0;
}

// ------------------------------------------------------------------- keyrate

int cmd_keyrate(double q, const std::vector<double>& ns, double eps_sec, double eps_corr,
                double eps_com_pe, double eps_com_ec, double xi, double omega3,
                const std::string& table, bool exhaustive, const std::string& out) {
  entropy::BoundCurve storage;
  keyrate::BoundSource src = resolve_bound(table, omega3, storage);
  const double omega_exp = games::msg_expected_win(q);
  const double Q = 1.0 - omega_exp;
  const long long l_ec = keyrate::min_lec_for_correctness(eps_corr);

  std::vector<keyrate::KeyRateReport> rows(ns.size());
  std::vector<double> gammas(ns.size()), dtols(ns.size());
  parallel::parallel_for(static_cast<int64_t>(ns.size()), [&](int64_t i) {
    keyrate::ProtocolParams frame;
    frame.n = ns[i];
    frame.delta_tol = std::pow(ns[i], -1.0 / 3.0);
    frame.gamma = keyrate::default_gamma(omega_exp, frame.delta_tol, ns[i], eps_com_pe);
    frame.omega_exp = omega_exp;
    frame.lambda_ec = xi * ns[i] * entropy::binary_entropy(Q);
    frame.l_ec = l_ec;
    frame.xi = xi;
    gammas[i] = frame.gamma;
    dtols[i] = frame.delta_tol;
    rows[i] =
        keyrate::optimize_finite_rate(src, 1.0, frame, eps_sec, eps_corr, eps_com_pe, eps_com_ec,
                                      exhaustive);
  });

  // asymptote: best per-round bound at omega_exp minus the EC cost
  double gmax = src.at(src.beta_max(1.0) - 1e-12)(omega_exp);
  for (int i = 0; i <= 2000; ++i) {
    double beta = src.beta_min() + (src.beta_max(1.0) - src.beta_min()) * i / 2000.0;
    if (beta <= src.beta_min() || beta >= src.beta_max(1.0)) continue;
    entropy::AffineBound g = src.at(beta);
    if (g.slope >= 0.0) gmax = std::max(gmax, g(omega_exp));
  }
  const double asym = gmax - xi * entropy::binary_entropy(Q);

  std::ostringstream ss;
  ss << "# " << kVersion << " config: command=keyrate q=" << fmt(q) << " n=" << join_list(ns)
     << " eps_sec=" << fmt(eps_sec) << " eps_corr=" << fmt(eps_corr)
     << " eps_com_pe=" << fmt(eps_com_pe) << " eps_com_ec=" << fmt(eps_com_ec)
     << " xi=" << fmt(xi) << " omega3=" << fmt(omega3)
     << " table=" << (table.empty() ? "-" : table) << " exhaustive=" << (exhaustive ? 1 : 0)
     << "\n";
  ss << "n,rate,l_key,d1,d0,beta,eps_s,gamma,delta_tol,feasible\n";
  bool any_feasible = false;
  for (size_t i = 0; i < ns.size(); ++i) {
    const auto& r = rows[i];
    any_feasible = any_feasible || r.feasible;
    ss << fmt(ns[i]) << "," << fmt(r.rate) << "," << fmt(r.l_key) << "," << fmt(r.d1) << ","
       << fmt(r.d0) << "," << fmt(r.beta) << "," << fmt(r.eps_s) << "," << fmt(gammas[i]) << ","
       << fmt(dtols[i]) << "," << (r.feasible ? 1 : 0) << "\n";
  }
  ss << "inf," << fmt(asym) << ",inf,,,,,,," << (asym > 0.0 ? 1 : 0) << "\n";
  emit(out, ss.str());
  if (!any_feasible) {
    std::cerr << "infeasible: no n in the sweep yields a positive key length\n";
    return 3;
  }
  return 0;
}

// -------------------------------------------------------------------- region

int cmd_region(double w2_min, double w2_max, int w2_steps, double w3_min, double w3_max,
               int w3_steps, double xi, const std::string& out) {
  auto grid = [](double lo, double hi, int steps) {
    std::vector<double> g;
    for (int i = 0; i < steps; ++i)
      g.push_back(steps == 1 ? lo : lo + (hi - lo) * i / (steps - 1));
    return g;
  };
  auto cells = keyrate::positivity_region(grid(w2_min, w2_max, w2_steps),
                                          grid(w3_min, w3_max, w3_steps), xi);
  std::ostringstream ss;
  ss << "# " << kVersion << " config: command=region omega2=[" << fmt(w2_min) << ","
     << fmt(w2_max) << "]x" << w2_steps << " omega3=[" << fmt(w3_min) << "," << fmt(w3_max)
     << "]x" << w3_steps << " xi=" << fmt(xi) << "\n";
  ss << "omega2,omega3,positive\n";
  for (const auto& c : cells)
    ss << fmt(c.omega2) << "," << fmt(c.omega3) << "," << (c.positive ? 1 : 0) << "\n";
  emit(out, ss.str());
  return 0;
}

// ------------------------------------------------------------------ simulate

int cmd_simulate(const std::string& game_id, const std::string& strategy_path, double q,
                 long long n, int trials, bool force_mismatch, long long l_ec, long long l_key,
                 double gamma_flag, double delta_tol_flag, double eps_com_pe, uint64_t seed,
                 const std::string& transcript_path, const std::string& out) {
  std::ostringstream cfg;
  cfg << "# " << kVersion << " config: command=simulate game=" << game_id << " q=" << fmt(q)
      << " n=" << n << " trials=" << trials << " force_mismatch=" << (force_mismatch ? 1 : 0)
      << " l_ec=" << l_ec << " l_key=" << l_key << " gamma=" << fmt(gamma_flag)
      << " delta_tol=" << fmt(delta_tol_flag) << " eps_com_pe=" << fmt(eps_com_pe)
      << " seed=" << seed << "\n";

  if (force_mismatch) {
    auto s = protocol::monte_carlo_correctness(static_cast<int>(l_ec),
                                               trials > 0 ? trials : 100000, seed);
    std::ostringstream ss;
    ss << cfg.str() << "trials,hash_passes,pass_rate,bound\n"
       << s.trials << "," << s.hash_passes << "," << fmt(s.pass_rate) << "," << fmt(s.bound)
       << "\n";
    emit(out, ss.str());
    return 0;
  }

  games::GameSpec game = resolve_game(game_id);
  games::QuantumStrategy base = resolve_strategy(game_id, strategy_path);
  if (q > 0.0) base = games::apply_depolarizing(base, q, base.two_pair_structure);
  protocol::DevicePair devices = protocol::honest_devices(game, base);

  keyrate::ProtocolParams params;
  params.n = static_cast<double>(n);
  params.omega_exp = game_id == "msg" ? games::msg_expected_win(q)
                                      : games::quantum_win_prob(game, base);
  params.delta_tol = delta_tol_flag > 0.0 ? delta_tol_flag : std::pow(params.n, -1.0 / 3.0);
  params.gamma = gamma_flag > 0.0
                     ? gamma_flag
                     : keyrate::default_gamma(params.omega_exp, params.delta_tol, params.n,
                                              eps_com_pe);
  params.l_ec = l_ec;
  params.l_key = std::min<long long>(l_key, n);
  params.validate();

  if (trials > 0) {
    auto s = protocol::monte_carlo_completeness(game, devices, params, trials, seed);
    std::ostringstream ss;
    ss << cfg.str() << "trials,pe_aborts,ec_aborts,pe_abort_rate,total_abort_rate,ci95\n"
       << s.trials << "," << s.pe_aborts << "," << s.ec_aborts << "," << fmt(s.pe_abort_rate)
       << "," << fmt(s.total_abort_rate) << "," << fmt(s.ci95_halfwidth) << "\n";
    emit(out, ss.str());
    return 0;
  }

  protocol::Transcript tr = protocol::run_protocol(game, devices, params, nullptr, seed);
  if (!transcript_path.empty()) emit(transcript_path, tr.to_json() + "\n");
  std::ostringstream ss;
  bool keys_match = !tr.aborted() && tr.key_a == tr.key_b;
  ss << cfg.str() << "pe_pass,ec_pass,aborted,key_bits,keys_match\n"
     << (tr.pe_pass ? 1 : 0) << "," << (tr.ec_pass ? 1 : 0) << "," << (tr.aborted() ? 1 : 0)
     << "," << tr.key_a.size() << "," << (keys_match ? 1 : 0) << "\n";
  emit(out, ss.str());
  return tr.aborted() ? 3 : 0;
}

// -------------------------------------------------------------------- bounds

int cmd_bounds(const std::string& table, double beta, int samples, const std::string& out) {
  std::string path = table.rfind("table:", 0) == 0 ? table.substr(6) : table;
  entropy::BoundCurve curve = entropy::load_curve_csv(path);
  entropy::AffineBound tan = entropy::tangent_of_curve(curve, beta);
  std::ostringstream ss;
  ss << "# " << kVersion << " config: command=bounds table=" << table << " beta=" << fmt(beta)
     << " samples=" << samples << " kind="
     << (curve.kind == entropy::BoundCurve::Kind::vn_lower ? "vn_lower" : "tripartite_win_upper")
     << " provenance=" << curve.provenance << "\n";
  ss << "x,curve,tangent\n";
  for (int i = 0; i < samples; ++i) {
    double x = curve.x_min() + (curve.x_max() - curve.x_min()) * i / (samples - 1);
    ss << fmt(x) << "," << fmt(curve.eval(x)) << "," << fmt(tan(x)) << "\n";
  }
  emit(out, ss.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nonlocal-game QKD toolkit"};
  app.require_subcommand(1);
  std::string config_path, out_path;
  uint64_t seed = 1;
  app.add_option("--config", config_path, "JSON file whose keys stand in for missing flags");
  app.add_option("--out", out_path, "output file (stdout when omitted)");
  app.add_option("--seed", seed, "RNG seed");

  // game-value
  auto* gv = app.add_subcommand("game-value", "classical and honest-quantum winning values");
  gv->fallthrough();
  std::string gv_game = "msg", gv_strategy;
  std::vector<double> gv_q = {0.0};
  gv->add_option("--game", gv_game, "msg, chsh, or custom:<file.json>");
  gv->add_option("--strategy", gv_strategy, "quantum strategy JSON");
  gv->add_option("--q", gv_q, "depolarizing noise grid")->expected(-1);

  // keyrate
  auto* kr = app.add_subcommand("keyrate", "finite key-rate sweep plus asymptote row");
  kr->fallthrough();
  double kr_q = 0.0, kr_eps_sec = 1e-6, kr_eps_corr = 1e-6, kr_eps_com_pe = 1e-2,
         kr_eps_com_ec = 1e-2, kr_xi = 1.1, kr_omega3 = 8.00077 / 9.0;
  std::vector<double> kr_n = {1e6, 1e7, 1e8, 1e9, 1e10, 1e11, 1e12};
  std::string kr_table;
  bool kr_exhaustive = false;
  kr->add_option("--q", kr_q, "depolarizing noise");
  kr->add_option("--n", kr_n, "block sizes")->expected(-1);
  kr->add_option("--eps-sec", kr_eps_sec);
  kr->add_option("--eps-corr", kr_eps_corr);
  kr->add_option("--eps-com-pe", kr_eps_com_pe);
  kr->add_option("--eps-com-ec", kr_eps_com_ec);
  kr->add_option("--xi", kr_xi, "EC efficiency factor");
  kr->add_option("--omega3", kr_omega3, "tripartite value for the affine bound family");
  kr->add_option("--table", kr_table, "bound curve CSV (table:<path> or <path>)");
  kr->add_flag("--exhaustive", kr_exhaustive, "also grid the epsilon sub-split");

  // region
  auto* rg = app.add_subcommand("region", "positivity region over (omega2, omega3)");
  rg->fallthrough();
  double rg_w2min = 0.75, rg_w2max = 1.0, rg_w3min = 0.75, rg_w3max = 1.0, rg_xi = 1.1;
  int rg_w2steps = 26, rg_w3steps = 26;
  rg->add_option("--omega2-min", rg_w2min);
  rg->add_option("--omega2-max", rg_w2max);
  rg->add_option("--omega2-steps", rg_w2steps);
  rg->add_option("--omega3-min", rg_w3min);
  rg->add_option("--omega3-max", rg_w3max);
  rg->add_option("--omega3-steps", rg_w3steps);
  rg->add_option("--xi", rg_xi);

  // simulate
  auto* sm = app.add_subcommand("simulate", "protocol run or Monte Carlo harness");
  sm->fallthrough();
  std::string sm_game = "msg", sm_strategy, sm_transcript;
  double sm_q = 0.0, sm_gamma = 0.0, sm_dtol = 0.0, sm_eps_com_pe = 1e-2;
  long long sm_n = 2000, sm_lec = 20, sm_lkey = 128;
  int sm_trials = 0;
  bool sm_mismatch = false;
  sm->add_option("--game", sm_game);
  sm->add_option("--strategy", sm_strategy, "quantum strategy JSON");
  sm->add_option("--q", sm_q, "depolarizing noise");
  sm->add_option("--n", sm_n, "rounds");
  sm->add_option("--trials", sm_trials, "Monte Carlo trials (0 = single run)");
  sm->add_flag("--force-mismatch", sm_mismatch, "hash-verification failure-rate harness");
  sm->add_option("--l-ec", sm_lec, "verification hash bits");
  sm->add_option("--l-key", sm_lkey, "PA output bits");
  sm->add_option("--gamma", sm_gamma, "testing probability (0 = derive)");
  sm->add_option("--delta-tol", sm_dtol, "PE tolerance (0 = n^{-1/3})");
  sm->add_option("--eps-com-pe", sm_eps_com_pe);
  sm->add_option("--transcript", sm_transcript, "transcript JSON output path");

  // bounds
  auto* bd = app.add_subcommand("bounds", "sample an ingested bound curve and a tangent");
  bd->fallthrough();
  std::string bd_table;
  double bd_beta = 0.98;
  int bd_samples = 200;
  bd->add_option("--table", bd_table, "curve CSV")->required();
  bd->add_option("--beta", bd_beta, "tangent point");
  bd->add_option("--samples", bd_samples, "sample count");

  try {
    std::vector<std::string> args = merge_config(argc, argv);
    std::reverse(args.begin(), args.end());  // CLI11 consumes in reverse
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (gv->parsed()) return cmd_game_value(gv_game, gv_strategy, gv_q, out_path);
    if (kr->parsed())
      return cmd_keyrate(kr_q, kr_n, kr_eps_sec, kr_eps_corr, kr_eps_com_pe, kr_eps_com_ec,
                         kr_xi, kr_omega3, kr_table, kr_exhaustive, out_path);
    if (rg->parsed())
      return cmd_region(rg_w2min, rg_w2max, rg_w2steps, rg_w3min, rg_w3max, rg_w3steps, rg_xi,
                        out_path);
    if (sm->parsed())
      return cmd_simulate(sm_game, sm_strategy, sm_q, sm_n, sm_trials, sm_mismatch, sm_lec,
                          sm_lkey, sm_gamma, sm_dtol, sm_eps_com_pe, seed, sm_transcript,
                          out_path);
    if (bd->parsed()) return cmd_bounds(bd_table, bd_beta, bd_samples, out_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
