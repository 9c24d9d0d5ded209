#include "hypercqed/cli/reproduce.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "hypercqed/error.hpp"
#include "hypercqed/geometry.hpp"
#include "hypercqed/greens.hpp"

namespace hypercqed::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

RunConfig make(Task task, int rings, std::string output, json params = json::object(),
               std::vector<QubitSpec> qubits = {}, double t = 1.0, LatticeKind kind = LatticeKind::vertex_graph) {
  RunConfig c;
  c.lattice = {7, 3, rings, kind};
  c.t = t;
  c.task = task;
  c.params = std::move(params);
  c.qubits = std::move(qubits);
  c.output = std::move(output);
  return c;
}

// Site whose distance from `from` is closest to `d`.
std::size_t site_at_distance(const HyperbolicLattice& lat, std::size_t from, double d) {
  std::size_t best = from;
  double err = INFINITY;
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const double e = std::abs(hyperbolic_distance(lat.site(i), lat.site(from)) - d);
    if (e < err - 1e-12) err = e, best = i;
  }
  return best;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// Two-column numeric CSV (comment and header lines skipped).
std::vector<std::pair<double, double>> read_xy(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw IoError("cannot read '" + p.string() + "'");
  std::vector<std::pair<double, double>> out;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    std::istringstream ls(line);
    std::string a, b;
    std::getline(ls, a, ',');
    std::getline(ls, b, ',');
    out.push_back({std::stod(a), std::stod(b)});
  }
  return out;
}

double step_at(const std::vector<std::pair<double, double>>& curve, double w) {
  double v = 0;
  for (const auto& [x, y] : curve) {
    if (x > w) break;
    v = y;
  }
  return v;
}

using Summaries = std::map<std::string, json>;

std::vector<Verdict> verdict_fig1(const Summaries& s) {
  const auto& b = s.at("boundstate");
  const auto& w = s.at("boundstate_half_g");
  const double ed = std::abs(b.at("energy").get<double>() - b.at("exact_energy").get<double>());
  const double xf = b.at("xi_fit"), xc = b.at("xi_continuum");
  const double r1 = std::abs(b.at("energy").get<double>() - b.at("weak_coupling_energy").get<double>());
  const double r2 = std::abs(w.at("energy").get<double>() - w.at("weak_coupling_energy").get<double>());
  return {
      {"bound-state root equals exact diagonalization (1e-8)", ed < 1e-8, fmt("|dE| = %.2e", ed)},
      {"photon envelope xi within 15% of the continuum correlation length", std::abs(xf - xc) <= 0.15 * xc,
       fmt("xi_fit %.4f, xi_continuum %.4f", xf, xc)},
      {"weak-coupling residual scales as g^4 (16 +- 30%)", std::abs(r1 / r2 - 16) <= 4.8, fmt("ratio %.3f", r1 / r2)},
  };
}

std::vector<Verdict> verdict_fig2(const Summaries& s, const fs::path& root) {
  std::vector<Verdict> v;
  std::string edges;
  bool edge_ok = true;
  for (int l = 4; l <= 7; ++l) {
    const double e = s.at("dos_l" + std::to_string(l)).at("E0");
    edge_ok = edge_ok && e >= -2.96 && e <= -2.88;
    edges += fmt("l=%.0f E0=%.5f; ", l, e);
  }
  v.push_back({"band edge in [-2.96, -2.88] for l >= 4", edge_ok, edges});
  const double target[] = {0.0066, 0.0052, 0.0044};
  for (int l = 5; l <= 7; ++l) {
    const double r = s.at("jspectral_l" + std::to_string(l)).at("rmse_J_vs_L1");
    v.push_back({"RMSE of J vs J_L1 (omega < -2) at l=" + std::to_string(l) + " within 20% of the quoted value",
                 std::abs(r - target[l - 5]) <= 0.2 * target[l - 5], fmt("RMSE %.4f, quoted %.4f", r, target[l - 5])});
  }
  const auto p6 = read_xy(root / "dos_l6" / "cumulative_dos.csv");
  const auto p7 = read_xy(root / "dos_l7" / "cumulative_dos.csv");
  const double lo = std::min(p6.front().first, p7.front().first);
  double worst = 0;
  for (int k = 0; k <= 400; ++k) {
    const double w = lo + (-2.0 - lo) * k / 400.0;
    worst = std::max(worst, std::abs(step_at(p6, w) - step_at(p7, w)));
  }
  v.push_back({"P(omega) for l=6 and l=7 differ by < 0.02 below -2", worst < 0.02, fmt("max diff %.4f", worst)});
  return v;
}

std::vector<Verdict> verdict_fig3(const Summaries& s) {
  const auto& d = s.at("decay_scan");
  const double rj = d.at("pearson_gamma_j"), rr = d.at("pearson_gamma_rho");
  const int n = d.at("deltas");
  return {
      {"at least 8 Delta values", n >= 8, fmt("%.0f values", n)},
      {"Pearson r(Gamma, j) > 0.9", rj > 0.9, fmt("r = %.3f", rj)},
      {"Gamma correlates better with j than with rho", rj > rr, fmt("r_j = %.3f, r_rho = %.3f", rj, rr)},
  };
}

std::vector<Verdict> verdict_fig4(const Summaries& s) {
  std::vector<Verdict> v;
  for (const char* k : {"scan_g", "scan_delta"}) {
    const auto& x = s.at(k);
    const double w = x.at("worst_relative_deviation");
    const int n = x.at("levels_compared");
    v.push_back({std::string(k) + ": roots within 2% of (E0 - E_B) of exact levels", n > 0 && w <= 0.02,
                 fmt("%.0f levels, worst %.2e", n, w)});
  }
  return v;
}

std::vector<Verdict> verdict_fig5(const Summaries& s, const fs::path& root) {
  const auto& f = s.at("flatband");
  const double deg = f.at("degeneracy"), n = f.at("N"), gap = f.at("gap");
  std::vector<Verdict> v{
      {"degenerate level holds > 10% of the states", deg > 0.1 * n, fmt("%.0f of %.0f", deg, n)},
      {"flat band is gapped", gap > 0, fmt("gap %.4f", gap)},
  };
  // couplings vanish outside the shared support of compact states
  json states;
  {
    std::ifstream in(root / "flatband" / "flatband_states.json");
    in >> states;
  }
  const std::size_t ref = f.at("map").at("qubit");
  const double g = f.at("map").at("g");
  std::set<std::size_t> reach;
  for (const auto& st : states.at("states")) {
    const auto sites = st.at("sites").get<std::vector<std::size_t>>();
    if (std::find(sites.begin(), sites.end(), ref) != sites.end()) reach.insert(sites.begin(), sites.end());
  }
  std::ifstream in(root / "flatband" / "coupling_map.csv");
  std::string line;
  double leak = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line[0] == 's') continue;
    std::istringstream ls(line);
    std::string site, re, im, j;
    std::getline(ls, site, ',');
    std::getline(ls, re, ',');
    std::getline(ls, im, ',');
    std::getline(ls, j, ',');
    if (!reach.count(std::stoul(site))) leak = std::max(leak, std::abs(std::stod(j)));
  }
  v.push_back({"couplings beyond the compact support are zero (< 1e-10 g^2)", leak < 1e-10 * g * g,
               fmt("max %.2e", leak)});
  const int pos = f.at("map").at("positive"), neg = f.at("map").at("negative");
  v.push_back({"couplings take both signs", pos > 0 && neg > 0, fmt("+%.0f / -%.0f", pos, neg)});
  return v;
}

}  // namespace

std::vector<std::string> figure_names() { return {"fig1", "fig2", "fig3", "fig4", "fig5"}; }

std::vector<RunConfig> figure_configs(const std::string& name) {
  if (name == "fig1") {
    const auto lat = generate_lattice({7, 3, 6});
    const std::size_t c = lat.center_site();
    const std::size_t far = site_at_distance(lat, c, 1.5);
    return {
        make(Task::spectrum, 6, "spectrum"),
        make(Task::boundstate, 6, "boundstate", {{"exact", true}}, {{c, -3.2, 0.05}}),
        make(Task::boundstate, 6, "boundstate_half_g", json::object(), {{c, -3.2, 0.025}}),
        make(Task::boundstate, 6, "boundstate_continuum", {{"backend", "continuum"}}, {{c, -3.2, 0.05}}),
        make(Task::greens, 6, "greens", {{"source", c}, {"omega", {-3.2}}, {"backend", "both"}}),
        make(Task::boundstate2, 6, "two_qubits", json::object(), {{c, -3.2, 0.05}, {far, -3.2, 0.05}}),
        make(Task::boundstate2, 6, "two_qubits_continuum", {{"backend", "continuum"}}, {{c, -3.2, 0.05}, {far, -3.2, 0.05}}),
    };
  }
  if (name == "fig2") {
    std::vector<RunConfig> v;
    for (int l = 4; l <= 7; ++l) v.push_back(make(Task::dos, l, "dos_l" + std::to_string(l), {{"bin", 0.05}}));
    for (int l = 5; l <= 7; ++l) v.push_back(make(Task::jspectral, l, "jspectral_l" + std::to_string(l), {{"omega_max", -2.0}}));
    return v;
  }
  if (name == "fig3") {
    const std::size_t c = generate_lattice({7, 3, 7}).center_site();
    return {
        make(Task::jspectral, 7, "j_bin015", {{"g", 0.3}, {"bin", 0.15}}),
        make(Task::dos, 7, "dos_bin015", {{"bin", 0.15}}),
        make(Task::dynamics, 7, "decay_scan", {{"bin", 0.3}, {"bin_centres", {{"k_min", 3}, {"k_max", 16}}}, {"t_max", 15.0}},
             {{c, 0.0, 0.3}}),
    };
  }
  if (name == "fig4") {
    return {
        make(Task::boundstate2, 6, "scan_g", {{"exact", true}, {"scan", {{"param", "g"}, {"values", {{"from", 0.05}, {"to", 1.0}, {"steps", 20}}}}}},
             {{0, -2.5, 0.5}, {2, -2.5, 0.5}}),
        make(Task::boundstate2, 6, "scan_delta", {{"exact", true}, {"scan", {{"param", "delta"}, {"values", {{"from", -3.5}, {"to", -2.95}, {"steps", 12}}}}}},
             {{0, -3.0, 0.5}, {1, -3.0, 0.5}}),
        make(Task::boundstate2, 6, "scan_g_continuum", {{"backend", "continuum"}, {"scan", {{"param", "g"}, {"values", {{"from", 0.05}, {"to", 1.0}, {"steps", 20}}}}}},
             {{0, -2.5, 0.5}, {2, -2.5, 0.5}}),
        make(Task::boundstate2, 6, "scan_delta_continuum", {{"backend", "continuum"}, {"scan", {{"param", "delta"}, {"values", {{"from", -3.5}, {"to", -2.95}, {"steps", 12}}}}}},
             {{0, -3.0, 0.5}, {1, -3.0, 0.5}}),
    };
  }
  if (name == "fig5") {
    const auto lg = line_graph(generate_lattice({7, 3, 3}));
    std::vector<long long> inner;
    for (std::size_t i = 0; i < lg.size(); ++i)
      if (lg.ring_of_site()[i] <= 2) inner.push_back(static_cast<long long>(i));
    const std::size_t ref = lg.center_site();
    return {
        make(Task::flatband, 3, "flatband", {{"map", {{"qubit", ref}, {"delta", -2.1}, {"g", 0.02}}}}, {}, -1.0,
             LatticeKind::line_graph),
        make(Task::spinmodel, 3, "spin_model", {{"generator", "flat_band"}, {"sites", inner}, {"delta", -2.1}, {"g", 0.02}},
             {}, -1.0, LatticeKind::line_graph),
    };
  }
  throw InvalidSpecError("unknown figure '" + name + "' (expected fig1 ... fig5)");
}

std::vector<Verdict> reproduce(const std::string& name, RunContext& ctx) {
  const auto configs = figure_configs(name);
  const fs::path root = ctx.out / name;
  Summaries sums;
  json manifests = json::array();
  for (const auto& cfg : configs) {
    RunContext sub;
    sub.out = root / cfg.output;
    sub.threads = ctx.threads;
    sub.strict = false;  // figure verdicts decide; warnings are collected below
    sums[cfg.output] = run(cfg, sub);
    for (const auto& w : sub.warnings) ctx.warn(cfg.output + ": " + w);
    manifests.push_back({{"output", cfg.output}, {"config_hash", config_hash(cfg)}});
  }
  std::vector<Verdict> v;
  if (name == "fig1") v = verdict_fig1(sums);
  else if (name == "fig2") v = verdict_fig2(sums, root);
  else if (name == "fig3") v = verdict_fig3(sums);
  else if (name == "fig4") v = verdict_fig4(sums);
  else v = verdict_fig5(sums, root);

  json checks = json::array();
  bool all = true;
  for (const auto& x : v) {
    checks.push_back({{"check", x.check}, {"pass", x.pass}, {"detail", x.detail}});
    all = all && x.pass;
  }
  std::ofstream os(root / "verdict.json", std::ios::binary);
  os << json{{"figure", name}, {"pass", all}, {"checks", checks}, {"runs", manifests}, {"warnings", ctx.warnings}}.dump(1)
     << '\n';
  return v;
}

}  // namespace hypercqed::cli
