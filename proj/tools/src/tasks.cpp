#include "hypercqed/cli/tasks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <optional>

#include "hypercqed/boundstates.hpp"
#include "hypercqed/dynamics.hpp"
#include "hypercqed/error.hpp"
#include "hypercqed/greens.hpp"
#include "hypercqed/parallel.hpp"
#include "hypercqed/spectral.hpp"
#include "hypercqed/spinmodel.hpp"

#ifndef HYPERCQED_VERSION
#define HYPERCQED_VERSION "unknown"
#endif

namespace hypercqed::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kUnits =
    "# units: energies and rates in t, times in 1/t, distances in the kappa=1/2 disk metric\n";

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

template <class T>
T param(const json& p, const char* key, T fallback) {
  if (!p.contains(key)) return fallback;
  try {
    return p.at(key).get<T>();
  } catch (const json::exception&) {
    throw InvalidSpecError(std::string("param '") + key + "' has the wrong type");
  }
}

std::size_t site_param(const json& p, const char* key, const HyperbolicLattice& lat) {
  if (!p.contains(key) || p.at(key) == "center") return lat.center_site();
  const auto s = param<long long>(p, key, -1);
  if (s < 0 || static_cast<std::size_t>(s) >= lat.size())
    throw InvalidSpecError(std::string("param '") + key + "' is not a site of the lattice");
  return static_cast<std::size_t>(s);
}

// Either an explicit array or {"from", "to", "steps"} (inclusive endpoints).
std::vector<double> values_param(const json& p, const char* key, std::vector<double> fallback) {
  if (!p.contains(key)) return fallback;
  const auto& v = p.at(key);
  if (v.is_array()) return param<std::vector<double>>(p, key, {});
  if (v.is_object()) {
    const double a = param(v, "from", 0.0), b = param(v, "to", 0.0);
    const int n = param(v, "steps", 2);
    if (n < 2) throw InvalidSpecError(std::string("param '") + key + "' needs steps >= 2");
    std::vector<double> out;
    for (int k = 0; k < n; ++k) out.push_back(a + (b - a) * k / (n - 1));
    return out;
  }
  if (v.is_number()) return {v.get<double>()};
  throw InvalidSpecError(std::string("param '") + key + "' must be a number, array or range");
}

const QubitSpec& qubit(const RunConfig& c, std::size_t k) {
  if (c.qubits.size() <= k)
    throw InvalidSpecError("task '" + std::string(to_string(c.task)) + "' needs at least " +
                           std::to_string(k + 1) + " qubit(s)");
  return c.qubits[k];
}

void check_sites(const RunConfig& c, const HyperbolicLattice& lat) {
  for (const auto& q : c.qubits)
    if (q.site >= lat.size())
      throw InvalidSpecError("qubit site " + std::to_string(q.site) + " out of range (N = " +
                             std::to_string(lat.size()) + ")");
}

ContinuumParams continuum_params(const json& p, const HyperbolicLattice& lat, double t) {
  auto cp = ContinuumParams::defaults();
  if (p.contains("Lambda") && p.at("Lambda").is_number()) {
    cp.Lambda = p.at("Lambda").get<double>();
  } else {
    cp.Lambda = calibrate_cutoff(lat, t).Lambda;
  }
  cp.E0 = param(p, "E0", cp.E0);
  return cp;
}

std::unique_ptr<GreenBackend> backend(const json& p, const HyperbolicLattice& lat, double t) {
  const auto kind = param<std::string>(p, "backend", "lattice");
  if (kind == "lattice") return std::make_unique<LatticeBackend>(lat, t);
  if (kind == "continuum") {
    if (t != 1.0) throw InvalidSpecError("the continuum backend assumes t = 1");
    return std::make_unique<ContinuumBackend>(lat, continuum_params(p, lat, t));
  }
  throw InvalidSpecError("backend must be 'lattice' or 'continuum'");
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) ma += a[i] / n, mb += b[i] / n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

void write_spectrum(RunContext& ctx, const Spectrum& s) {
  auto os = ctx.open("spectrum.csv");
  os << "index,energy\n";
  for (std::size_t k = 0; k < s.size(); ++k) os << k << ',' << num(s.values(static_cast<Eigen::Index>(k))) << '\n';
}

json task_spectrum(const RunConfig&, const HyperbolicLattice& lat, const SingleExcitationOperator& op, RunContext& ctx) {
  const auto s = eigendecompose(op, false);
  write_spectrum(ctx, s);
  return {{"N", lat.size()}, {"lowest", s.lowest()}, {"highest", s.highest()}};
}

json task_dos(const RunConfig& c, const HyperbolicLattice& lat, const SingleExcitationOperator& op, RunContext& ctx) {
  const double bin = param(c.params, "bin", 0.05);
  const auto s = eigendecompose(op, false);
  {
    auto os = ctx.open("dos.csv");
    write_curve_csv(os, dos_histogram(s, bin));
  }
  {
    auto os = ctx.open("cumulative_dos.csv");
    write_curve_csv(os, cumulative_dos(s, s.size()));
  }
  return {{"N", lat.size()}, {"bin", bin}, {"E0", s.lowest()}, {"Emax", s.highest()},
          {"effective_radius", lat.effective_radius()}, {"N0", lat.n0()}};
}

json task_jspectral(const RunConfig& c, const HyperbolicLattice& lat, const SingleExcitationOperator& op,
                    RunContext& ctx) {
  const auto s = eigendecompose(op, true);
  const std::size_t site = site_param(c.params, "site", lat);
  const double g = param(c.params, "g", 1.0);
  const double bin = param(c.params, "bin", 0.05);
  const double wmax = param(c.params, "omega_max", -2.0);
  const double M = effective_mass(lat.lattice_constant(), lat.spec().kind == LatticeKind::line_graph ? 2 * (lat.spec().q - 1) : lat.spec().q);
  const auto e0_mode = param<std::string>(c.params, "e0", "lattice");
  if (e0_mode != "lattice" && e0_mode != "continuum") throw InvalidSpecError("param 'e0' must be lattice or continuum");
  const double e0 = e0_mode == "lattice" ? s.lowest() : -3.0 * std::abs(c.t) + 1.0 / M;
  {
    auto os = ctx.open("j.csv");
    write_curve_csv(os, local_spectral_function(s, site, g, bin));
  }
  const auto J = cumulative_spectral(s, site);
  {
    auto os = ctx.open("J.csv");
    write_curve_csv(os, J);
  }
  {
    SpectralCurve l1;
    l1.kind = CurveKind::continuum_L1;
    for (double w : J.omega) {
      l1.omega.push_back(w);
      l1.values.push_back(continuum_J_L1(w, M, e0));
    }
    auto os = ctx.open("J_L1.csv");
    write_curve_csv(os, l1);
  }
  return {{"site", site}, {"g", g}, {"bin", bin}, {"M", M}, {"E0", e0},
          {"rmse_J_vs_L1", cumulative_j_rmse(s, site, M, e0, wmax)}, {"omega_max", wmax}};
}

json task_greens(const RunConfig& c, const HyperbolicLattice& lat, const SingleExcitationOperator& op,
                 RunContext& ctx) {
  const std::size_t src = site_param(c.params, "source", lat);
  const auto omegas = values_param(c.params, "omega", {-3.2});
  const double eta = param(c.params, "eta", 0.0);
  const auto which = param<std::string>(c.params, "backend", "lattice");
  if (which != "lattice" && which != "continuum" && which != "both")
    throw InvalidSpecError("param 'backend' must be lattice, continuum or both");
  const bool use_lat = which != "continuum", use_cont = which != "lattice";
  if (use_cont && eta != 0.0) throw InvalidSpecError("the continuum Green function is real; use eta = 0");

  std::vector<GreenEvaluation> rows;
  json fits = json::array();
  const double h = lat.edge_length();
  std::optional<ContinuumParams> cp;
  if (use_cont) cp = continuum_params(c.params, lat, c.t);
  for (double w : omegas) {
    if (use_lat) {
      Eigen::VectorXcd col;
      if (eta == 0.0) col = Resolvent(op.photon_block(), w).column(src).cast<std::complex<double>>();
      else col = Resolvent(op.photon_block(), w, eta).complex_column(src);
      std::vector<std::pair<double, double>> fit;
      for (std::size_t i = 0; i < lat.size(); ++i) {
        const double d = hyperbolic_distance(lat.site(i), lat.site(src));
        rows.push_back({w, eta, d, col(static_cast<Eigen::Index>(i)), GreenProvenance::lattice_resolvent});
        if (d >= 2 * h && d <= 6 * h) fit.push_back({d, std::abs(col(static_cast<Eigen::Index>(i)))});
      }
      if (fit.size() >= 4) fits.push_back({{"omega", w}, {"backend", "lattice"}, {"xi", fit_decay(fit).xi}});
    }
    if (use_cont) {
      std::vector<std::pair<double, double>> fit;
      for (std::size_t i = 0; i < lat.size(); ++i) {
        if (i == src) {
          rows.push_back(continuum_green_onsite(w, *cp));
          continue;
        }
        const auto ev = continuum_green_offsite(lat.site(src), lat.site(i), w, *cp);
        rows.push_back(ev);
        if (ev.distance >= 2 * h && ev.distance <= 6 * h) fit.push_back({ev.distance, std::abs(ev.value.real())});
      }
      if (fit.size() >= 4) fits.push_back({{"omega", w}, {"backend", "continuum"}, {"xi", fit_decay(fit).xi}});
    }
  }
  {
    auto os = ctx.open("greens.csv");
    write_green_csv(os, rows);
  }
  json out{{"source", src}, {"eta", eta}, {"fits", fits}};
  if (cp) out["continuum"] = {{"M", cp->M}, {"E0", cp->E0}, {"Lambda", cp->Lambda}, {"kappa", cp->kappa}};
  if (c.lattice.kind == LatticeKind::vertex_graph && c.t == 1.0) {
    const auto cal = calibrate_cutoff(lat, c.t);
    out["calibration"] = {{"C", cal.C}, {"M", cal.M}, {"Lambda", cal.Lambda}, {"Lambda1", cal.Lambda1}};
  }
  return out;
}

json result_json(const BoundStateResult& r) {
  return {{"energy", r.energy}, {"residual", r.residual}, {"spin_amplitudes", r.spin_amplitudes},
          {"parity", to_string(r.parity)}, {"backend", to_string(r.backend)}};
}

json task_boundstate(const RunConfig& c, const HyperbolicLattice& lat, const SingleExcitationOperator&,
                     RunContext& ctx) {
  const auto& q = qubit(c, 0);
  const auto gb = backend(c.params, lat, c.t);
  const auto branch_s = param<std::string>(c.params, "branch", "lower");
  if (branch_s != "lower" && branch_s != "upper") throw InvalidSpecError("param 'branch' must be lower or upper");
  const auto r = solve_single_bound_state(*gb, q, branch_s == "lower" ? Branch::lower : Branch::upper);
  json out = result_json(r);
  out["weak_coupling_energy"] = weak_coupling_energy(*gb, q);
  {
    auto os = ctx.open("density.csv");
    write_density_csv(os, lat, photon_density(r));
  }
  {
    auto os = ctx.open("amplitudes.csv");
    os << "site,d,psi\n";
    for (std::size_t i = 0; i < lat.size(); ++i)
      os << i << ',' << num(hyperbolic_distance(lat.site(i), lat.site(q.site))) << ','
         << num(r.photon_amplitudes(static_cast<Eigen::Index>(i))) << '\n';
  }
  const double h = lat.edge_length();
  std::vector<std::pair<double, double>> fit;
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const double d = hyperbolic_distance(lat.site(i), lat.site(q.site));
    const double a = std::abs(r.photon_amplitudes(static_cast<Eigen::Index>(i)));
    if (d >= 2 * h && d <= 6 * h && a > 0) fit.push_back({d, a});
  }
  if (fit.size() >= 4) {
    const auto cp = ContinuumParams::defaults();
    out["xi_fit"] = fit_decay(fit).xi;
    if (r.energy < cp.E0) out["xi_continuum"] = correlation_length(r.energy, cp.M, cp.E0);
  }
  if (param(c.params, "exact", false)) {
    const double edge = band_edges(build_photon_operator(lat, c.t).matrix()).lower;
    const auto ed = exact_bound_levels(lat, c.t, {q}, edge);
    if (!ed.empty()) out["exact_energy"] = ed.front();
  }
  return out;
}

json task_boundstate2(const RunConfig& c, const HyperbolicLattice& lat, const SingleExcitationOperator&,
                      RunContext& ctx) {
  const QubitSpec q1 = qubit(c, 0), q2 = qubit(c, 1);
  const auto gb = backend(c.params, lat, c.t);
  const bool exact = param(c.params, "exact", false);
  const double edge = gb->kind() == Backend::lattice ? gb->lower_edge()
                                                     : band_edges(build_photon_operator(lat, c.t).matrix()).lower;
  json out{{"distance", hyperbolic_distance(lat.site(q1.site), lat.site(q2.site))}, {"backend", to_string(gb->kind())}};

  if (!c.params.contains("scan")) {
    const auto tq = solve_two_qubit_bound_states(*gb, q1, q2);
    if (tq.plus) {
      out["plus"] = result_json(*tq.plus);
      auto os = ctx.open("density_plus.csv");
      write_density_csv(os, lat, photon_density(*tq.plus));
    } else {
      out["plus_note"] = tq.plus_note;
    }
    if (tq.minus) {
      out["minus"] = result_json(*tq.minus);
      auto os = ctx.open("density_minus.csv");
      write_density_csv(os, lat, photon_density(*tq.minus));
    } else {
      out["minus_note"] = tq.minus_note;
    }
    out["merged"] = tq.merged;
    if (exact) out["exact_levels"] = exact_bound_levels(lat, c.t, {q1, q2}, edge);
    return out;
  }

  const auto& scan = c.params.at("scan");
  const auto what = param<std::string>(scan, "param", "g");
  if (what != "g" && what != "delta") throw InvalidSpecError("scan.param must be g or delta");
  const auto vals = values_param(scan, "values", {});
  if (vals.empty()) throw InvalidSpecError("scan.values is empty");

  std::vector<TwoQubitScanRow> rows(vals.size());
  std::vector<std::vector<double>> ed(vals.size());
  std::vector<std::string> notes(vals.size());
  parallel_for(vals.size(), ctx.threads, [&](std::size_t k) {
    QubitSpec a = q1, b = q2;
    if (what == "g") a.g = b.g = vals[k];
    else a.delta = b.delta = vals[k];
    TwoQubitScanRow row{vals[k], std::nan(""), std::nan(""), 0.0};
    if (a.g > 0.0) {
      const auto tq = solve_two_qubit_bound_states(*gb, a, b);
      if (tq.plus) row.e_plus = tq.plus->energy, row.residual = tq.plus->residual;
      if (tq.minus) row.e_minus = tq.minus->energy, row.residual = std::max(row.residual, tq.minus->residual);
      notes[k] = tq.plus_note + (tq.minus_note.empty() ? "" : "; " + tq.minus_note);
    }
    rows[k] = row;
    if (exact) ed[k] = exact_bound_levels(lat, c.t, {a, b}, edge);
  });
  {
    auto os = ctx.open("scan.csv");
    write_scan_csv(os, rows);
  }
  out["scan_param"] = what;
  out["points"] = vals.size();
  if (exact) {
    auto os = ctx.open("exact_levels.csv");
    os << "param,E_1,E_2\n";
    double worst = 0;
    int compared = 0;
    for (std::size_t k = 0; k < vals.size(); ++k) {
      os << num(vals[k]) << ',' << (ed[k].size() > 0 ? num(ed[k][0]) : "nan") << ','
         << (ed[k].size() > 1 ? num(ed[k][1]) : "nan") << '\n';
      std::vector<double> roots;
      for (double e : {rows[k].e_plus, rows[k].e_minus})
        if (!std::isnan(e)) roots.push_back(e);
      std::sort(roots.begin(), roots.end());
      for (std::size_t i = 0; i < std::min(roots.size(), ed[k].size()); ++i) {
        worst = std::max(worst, std::abs(roots[i] - ed[k][i]) / (edge - ed[k][i]));
        ++compared;
      }
    }
    out["lower_edge"] = edge;
    out["levels_compared"] = compared;
    out["worst_relative_deviation"] = worst;
  }
  return out;
}

json task_dynamics(const RunConfig& c, const HyperbolicLattice& lat, const SingleExcitationOperator&,
                   RunContext& ctx) {
  const auto& q = qubit(c, 0);
  const auto mode = param<std::string>(c.params, "mode", "scan");
  const double t_max = param(c.params, "t_max", 15.0);
  const auto samples = param<std::size_t>(c.params, "samples", 151);
  if (samples < 3) throw InvalidSpecError("param 'samples' must be at least 3");
  const auto ph = eigendecompose(build_photon_operator(lat, c.t), true);

  if (mode == "evolve") {
    const auto op = build_qubit_photon_operator(lat, c.t, c.qubits);
    std::vector<double> times;
    for (std::size_t k = 0; k < samples; ++k) times.push_back(t_max * k / (samples - 1));
    const auto r = evolve(op, op.qubit_index(0), times, param(c.params, "photon_populations", false));
    {
      auto os = ctx.open("evolution.csv");
      write_evolution_csv(os, r);
    }
    std::vector<double> p(r.times.size());
    for (std::size_t k = 0; k < p.size(); ++k) p[k] = r.excited_population(static_cast<Eigen::Index>(k), 0);
    double nerr = 0;
    for (double n : r.norm) nerr = std::max(nerr, std::abs(n - 1.0));
    json out{{"max_norm_error", nerr}};
    try {
      const auto fit = fit_decay_rate(r.times, p, 0.0, t_max);
      out["gamma"] = fit.gamma;
      out["stderr"] = fit.stderr_;
      out["quality_warning"] = fit.quality_warning;
      if (fit.quality_warning) ctx.warn("decay fit is not exponential (stderr/gamma > 0.25)");
    } catch (const DomainError& e) {
      out["fit_error"] = e.what();
    }
    return out;
  }
  if (mode != "scan") throw InvalidSpecError("param 'mode' must be scan or evolve");

  const double bin = param(c.params, "bin", 0.3);
  std::vector<double> deltas;
  if (c.params.contains("bin_centres")) {
    const auto& bc = c.params.at("bin_centres");
    for (int k = param(bc, "k_min", 3); k <= param(bc, "k_max", 16); ++k) deltas.push_back(ph.lowest() + (k + 0.5) * bin);
  } else {
    deltas = values_param(c.params, "deltas", {q.delta});
  }
  const auto rows = decay_scan(ph, q.site, q.g, deltas, bin, t_max, samples, ctx.threads);
  {
    auto os = ctx.open("decay_scan.csv");
    write_decay_scan_csv(os, rows);
  }
  std::vector<double> gam, j, rho;
  int warned = 0;
  for (const auto& r : rows) {
    gam.push_back(r.gamma);
    j.push_back(r.j_binned);
    rho.push_back(r.rho_binned);
    warned += r.quality_warning;
  }
  if (warned) ctx.warn(std::to_string(warned) + " decay fit(s) flagged as non-exponential");
  json out{{"deltas", deltas.size()}, {"quality_warnings", warned}, {"site", q.site}, {"g", q.g}, {"bin", bin}};
  if (rows.size() >= 3) {
    out["pearson_gamma_j"] = pearson(gam, j);
    out["pearson_gamma_rho"] = pearson(gam, rho);
    const auto conv = markov_convention_from_string(param<std::string>(c.params, "convention", "full"));
    double dev = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) dev += std::abs(std::log(gam[i] / markov_gamma(j[i], conv)));
    out["convention"] = to_string(conv);
    out["mean_abs_log_ratio"] = dev / rows.size();
  }
  return out;
}

json task_spinmodel(const RunConfig& c, const HyperbolicLattice& lat, const SingleExcitationOperator&,
                    RunContext& ctx) {
  std::vector<std::size_t> sites;
  if (c.params.contains("sites")) {
    for (auto s : param<std::vector<long long>>(c.params, "sites", {})) {
      if (s < 0 || static_cast<std::size_t>(s) >= lat.size()) throw InvalidSpecError("spin-model site out of range");
      sites.push_back(static_cast<std::size_t>(s));
    }
  } else {
    for (const auto& q : c.qubits) sites.push_back(q.site);
  }
  if (sites.empty()) throw InvalidSpecError("spinmodel needs 'sites' or qubits");
  const double delta = param(c.params, "delta", c.qubits.empty() ? 0.0 : c.qubits[0].delta);
  const double g = param(c.params, "g", c.qubits.empty() ? 0.0 : c.qubits[0].g);
  GuardOptions guard{param(c.params, "guard_factor", 5.0), ctx.strict};
  const auto gen = param<std::string>(c.params, "generator", "green_function");
  SpinCouplingMatrix m;
  if (gen == "green_function") {
    m = effective_flip_flop(lat, c.t, sites, delta, g, guard);
  } else if (gen == "flat_band") {
    const auto fb = find_flat_band(lat, c.t, param(c.params, "tol", 0.0));
    m = flat_band_spin_model(fb, lat, sites, delta, g,
                             flat_band_kernel_from_string(param<std::string>(c.params, "kernel", "localized")), guard);
  } else {
    throw InvalidSpecError("param 'generator' must be green_function or flat_band");
  }
  for (const auto& w : m.warnings) ctx.warn(w);
  {
    auto os = ctx.open("spin_model.json");
    os << spin_model_to_json(m) << '\n';
  }
  return {{"sites", sites.size()}, {"generator", gen}, {"max_abs_J", m.J.cwiseAbs().maxCoeff()}};
}

json task_flatband(const RunConfig& c, const HyperbolicLattice& lat, const SingleExcitationOperator&,
                   RunContext& ctx) {
  const auto fb = find_flat_band(lat, c.t, param(c.params, "tol", 0.0));
  {
    auto os = ctx.open("spectrum.csv");
    os << "index,energy\n";
    for (std::size_t k = 0; k < fb.spectrum.size(); ++k) os << k << ',' << num(fb.spectrum[k]) << '\n';
  }
  std::size_t max_support = 0, boundary = 0;
  for (std::size_t k = 0; k < fb.support.size(); ++k) {
    max_support = std::max(max_support, fb.support[k].size());
    boundary += fb.boundary[k];
  }
  json out{{"N", lat.size()}, {"omega_flat", fb.omega_flat}, {"degeneracy", fb.degeneracy},
           {"next_level", fb.next_level}, {"gap", fb.gap}, {"localized_states", fb.localized.cols()},
           {"localized_rank", fb.localized_rank}, {"max_support", max_support}, {"boundary_states", boundary},
           {"search_radius", fb.search_radius}};
  {
    json sup = json::array();
    for (std::size_t k = 0; k < fb.support.size(); ++k) sup.push_back({{"sites", fb.support[k]}, {"boundary", bool(fb.boundary[k])}});
    auto os = ctx.open("flatband_states.json");
    os << json{{"omega_flat", fb.omega_flat}, {"states", sup}}.dump(1) << '\n';
  }
  if (c.params.contains("map")) {
    // couplings of every site to one reference qubit
    const auto& mp = c.params.at("map");
    const std::size_t ref = site_param(mp, "qubit", lat);
    const double delta = param(mp, "delta", fb.omega_flat - 0.1);
    const double g = param(mp, "g", 0.02);
    std::vector<std::size_t> all{ref};
    for (std::size_t i = 0; i < lat.size(); ++i)
      if (i != ref) all.push_back(i);
    const auto m = flat_band_spin_model(fb, lat, all, delta, g,
                                        flat_band_kernel_from_string(param<std::string>(mp, "kernel", "localized")),
                                        {5.0, ctx.strict});
    for (const auto& w : m.warnings) ctx.warn(w);
    auto os = ctx.open("coupling_map.csv");
    os << "site,re,im,J,sign\n";
    int pos = 0, neg = 0;
    for (std::size_t k = 1; k < all.size(); ++k) {
      const double j = m.J(0, static_cast<Eigen::Index>(k));
      const int sg = std::abs(j) < 1e-10 * g * g ? 0 : (j > 0 ? 1 : -1);
      pos += sg > 0;
      neg += sg < 0;
      os << all[k] << ',' << num(lat.site(all[k]).re()) << ',' << num(lat.site(all[k]).im()) << ',' << num(j) << ','
         << sg << '\n';
    }
    out["map"] = {{"qubit", ref}, {"delta", delta}, {"g", g}, {"positive", pos}, {"negative", neg}};
  }
  return out;
}

}  // namespace

std::ofstream RunContext::open(const std::string& name) {
  fs::create_directories(out);
  std::ofstream os(out / name, std::ios::binary);
  if (!os) throw IoError("cannot write '" + (out / name).string() + "'");
  outputs.push_back(name);
  if (name.size() > 4 && name.compare(name.size() - 4, 4, ".csv") == 0) os << kUnits;
  return os;
}

void RunContext::warn(std::string msg) { warnings.push_back(std::move(msg)); }

const char* library_version() noexcept { return HYPERCQED_VERSION; }

json run_task(const RunConfig& cfg, RunContext& ctx) {
  const auto lat = generate_lattice(cfg.lattice);
  check_sites(cfg, lat);
  const auto op = build_qubit_photon_operator(lat, cfg.t, {});
  json summary;
  switch (cfg.task) {
    case Task::spectrum: summary = task_spectrum(cfg, lat, op, ctx); break;
    case Task::dos: summary = task_dos(cfg, lat, op, ctx); break;
    case Task::jspectral: summary = task_jspectral(cfg, lat, op, ctx); break;
    case Task::greens: summary = task_greens(cfg, lat, op, ctx); break;
    case Task::boundstate: summary = task_boundstate(cfg, lat, op, ctx); break;
    case Task::boundstate2: summary = task_boundstate2(cfg, lat, op, ctx); break;
    case Task::dynamics: summary = task_dynamics(cfg, lat, op, ctx); break;
    case Task::spinmodel: summary = task_spinmodel(cfg, lat, op, ctx); break;
    case Task::flatband: summary = task_flatband(cfg, lat, op, ctx); break;
  }
  summary["task"] = to_string(cfg.task);
  summary["N"] = lat.size();
  {
    auto os = ctx.open("summary.json");
    os << summary.dump(1) << '\n';
  }
  return summary;
}

json run(const RunConfig& cfg, RunContext& ctx) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto summary = run_task(cfg, ctx);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  json manifest{{"config", config_to_json(cfg)}, {"config_hash", config_hash(cfg)},
                {"version", library_version()}, {"task", to_string(cfg.task)},
                {"threads", ctx.threads}, {"wall_time_s", wall},
                {"outputs", ctx.outputs}, {"warnings", ctx.warnings}};
  {
    std::ofstream os(ctx.out / "manifest.json", std::ios::binary);
    if (!os) throw IoError("cannot write manifest");
    os << manifest.dump(1) << '\n';
  }
  if (ctx.strict && !ctx.warnings.empty()) {
    throw DomainError("warnings promoted to errors (--strict): " + ctx.warnings.front());
  }
  return summary;
}

}  // namespace hypercqed::cli
