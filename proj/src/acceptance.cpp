#include "mcid/acceptance.hpp"

#include "mcid/chain.hpp"
#include "mcid/embed.hpp"
#include "mcid/fixtures.hpp"
#include "mcid/oracle.hpp"
#include "mcid/parallel.hpp"
#include "mcid/partition.hpp"
#include "mcid/rng.hpp"
#include "mcid/testing.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <optional>
#include <sstream>

namespace mcid::acceptance {

namespace {

// Tally of hard checks; keeps the first failure message.
struct Audit {
  long checks = 0;
  long violations = 0;
  std::string first;

  void expect(bool ok, const std::function<std::string()>& why) {
    ++checks;
    if (ok) return;
    if (violations++ == 0) first = why();
  }
  void merge(const Audit& o) {
    if (violations == 0 && o.violations > 0) first = o.first;
    checks += o.checks;
    violations += o.violations;
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

int between(Rng& rng, int lo, int hi) { return lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(hi - lo + 1))); }

// Runs `count` independent cases in parallel, then folds their audits in index order.
template <typename F>
Audit run_cases(std::size_t count, int threads, F&& one) {
  std::vector<Audit> parts(count);
  parallel_for(count, threads, [&](std::size_t i) { parts[i] = one(i); });
  Audit all;
  for (const auto& a : parts) all.merge(a);
  return all;
}

nlohmann::ordered_json audit_json(const Audit& a) { return {{"checks", a.checks}, {"violations", a.violations}}; }

// ----- 1: exactness -----

CriterionResult exactness(const SuiteOptions& o) {
  const std::uint64_t seed = derive_seed(o.config.master_seed, 1);
  CriterionResult r;

  Audit dist = run_cases(100, o.threads, [&](std::size_t i) {
    Audit a;
    Rng rng(derive_seed(seed, {0, i}));
    const int n = between(rng, 1, 50);
    const auto p = fixtures::random_chain(n, rng(), 0.2 + 0.8 * rng.uniform());
    const double d = chain_distance(p, p);
    a.expect(std::abs(d) <= 1e-9, [&] { return "chain_distance(P,P) = " + fmt(d) + " at n=" + std::to_string(n); });
    return a;
  });

  Audit sandwich = run_cases(1000, o.threads, [&](std::size_t i) {
    Audit a;
    Rng rng(derive_seed(seed, {1, i}));
    const int k = between(rng, 2, 30);
    const auto p = fixtures::random_distribution(k, rng()), q = fixtures::random_distribution(k, rng());
    const double h = hellinger_sq(p, q), tv = total_variation(p, q);
    a.expect(std::sqrt(2.0 * h) >= tv - 1e-12 && tv >= h - 1e-12,
             [&] { return "sandwich broken: hel^2=" + fmt(h) + " tv=" + fmt(tv); });
    return a;
  });

  double worst_recon = 0.0;
  std::vector<double> recon(200, 0.0);
  Audit cuts = run_cases(200, o.threads, [&](std::size_t i) {
    Audit a;
    Rng rng(derive_seed(seed, {2, i}));
    const int n = between(rng, 1, 30), m = between(rng, 1, 12);
    Embedding e;
    e.coords.resize(n, m);
    // Coarse grids on some draws so that ties between coordinates occur.
    const bool grid = rng.bernoulli(0.5);
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < m; ++y) e.coords(x, y) = grid ? static_cast<double>(rng.below(4)) : 10.0 * rng.uniform() - 5.0;
    const auto dec = l1_to_cuts(e);
    a.expect(static_cast<long>(dec.cuts.size()) <= static_cast<long>(m) * std::max(0, n - 1),
             [&] { return "too many cuts: " + std::to_string(dec.cuts.size()); });
    for (const auto& c : dec.cuts)
      a.expect(c.weight > 0.0 && !c.side.empty() && !c.side.is_full(), [] { return std::string("degenerate cut"); });
    for (int x = 0; x < n; ++x)
      for (int y = x + 1; y < n; ++y) {
        const double err = std::abs(dec.distance(x, y) - e.l1(x, y));
        recon[i] = std::max(recon[i], err);
        a.expect(err <= 1e-12, [&] { return "reconstruction error " + fmt(err); });
      }
    return a;
  });
  for (double v : recon) worst_recon = std::max(worst_recon, v);

  Audit observed = run_cases(100, o.threads, [&](std::size_t i) {
    Audit a;
    Rng rng(derive_seed(seed, {3, i}));
    const int n = between(rng, 2, 20);
    const auto p = fixtures::random_connected_chain(n, rng());
    const auto T = fixtures::random_subset(n, between(rng, 1, n), rng());
    try {
      const StochasticMatrix q = observed_chain(p, T);  // validated on construction
      for (int x = 0; x < T.size(); ++x)
        for (int y = 0; y < T.size(); ++y)
          a.expect(q(x, y) >= p(T[x], T[y]) - 1e-12, [&] { return "observed chain loses mass on T=" + T.to_string(); });
    } catch (const std::exception& e) {
      a.expect(false, [&] { return std::string("observed_chain: ") + e.what(); });
    }
    return a;
  });

  r.measured["self_distance"] = audit_json(dist);
  r.measured["distance_sandwich"] = audit_json(sandwich);
  r.measured["cut_reconstruction"] = audit_json(cuts);
  r.measured["cut_reconstruction"]["max_error"] = worst_recon;
  r.measured["observed_chain"] = audit_json(observed);
  Audit all;
  for (const auto* a : {&dist, &sandwich, &cuts, &observed}) all.merge(*a);
  r.passed = all.violations == 0;
  r.failure = all.first;
  return r;
}

// ----- 2: spectral inequalities -----

CriterionResult spectral(const SuiteOptions& o) {
  const std::uint64_t seed = derive_seed(o.config.master_seed, 2);
  CriterionResult r;
  std::vector<double> slack_tnb(100, 1.0), slack_gap(100, 1.0);
  Audit a = run_cases(100, o.threads, [&](std::size_t i) {
    Audit a;
    Rng rng(derive_seed(seed, i));
    const int n = between(rng, 2, 12);
    const auto p = i % 2 ? fixtures::random_connected_chain(n, rng())
                         : fixtures::planted_blocks({n / 2, n - n / 2}, 0.01 + 0.3 * rng.uniform(), rng());
    const auto T = fixtures::random_subset(n, between(rng, 1, n - 1), rng());
    const double alpha_t = oracle::min_escape_ratio_exact(p.matrix(), T);
    const double norm = spectral_norm_symmetric(submatrix(p.matrix(), T));
    slack_tnb[i] = 1.0 - alpha_t * alpha_t / 2.0 - norm;
    a.expect(norm <= 1.0 - alpha_t * alpha_t / 2.0 + 1e-12, [&] {
      return "|P_T| = " + fmt(norm) + " > 1 - alpha^2/2 with alpha = " + fmt(alpha_t) + ", T=" + T.to_string();
    });
    const double alpha = oracle::cheeger_exact(p);
    const double lambda2 = symmetric_eigenvalues_desc(p.matrix())(1);
    slack_gap[i] = 1.0 - alpha * alpha / 2.0 - lambda2;
    a.expect(lambda2 <= 1.0 - alpha * alpha / 2.0 + 1e-12,
             [&] { return "lambda_2 = " + fmt(lambda2) + " > 1 - h^2/2 with h = " + fmt(alpha); });
    return a;
  });
  r.measured["instances"] = 100;
  r.measured["checks"] = a.checks;
  r.measured["violations"] = a.violations;
  r.measured["min_slack_submatrix_norm"] = *std::min_element(slack_tnb.begin(), slack_tnb.end());
  r.measured["min_slack_second_eigenvalue"] = *std::min_element(slack_gap.begin(), slack_gap.end());
  r.passed = a.violations == 0;
  r.failure = a.first;
  return r;
}

// ----- 3: hitting time -----

// Upper bound on the Cheeger constant: exact when small enough to enumerate, otherwise the
// best of the spectral sweep cuts and singletons. Any cut's expansion bounds h from above,
// so checking against it is at least as strict as checking against h itself.
double cheeger_upper(const StochasticMatrix& p, bool& exact) {
  const int n = p.size();
  exact = n <= 16;
  if (exact) return oracle::cheeger_exact(p);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(p.matrix());
  const Eigen::VectorXd f = es.eigenvectors().col(n - 2);
  std::vector<State> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](State a, State b) { return f(a) < f(b); });
  double best = std::numeric_limits<double>::infinity();
  for (int k = 1; k < n; ++k) {
    best = std::min(best, expansion(p, StateSubset(std::vector<State>(order.begin(), order.begin() + k), n)));
    best = std::min(best, expansion(p, StateSubset({order[k - 1]}, n)));
  }
  best = std::min(best, expansion(p, StateSubset({order[n - 1]}, n)));
  return best;
}

CriterionResult hitting(const SuiteOptions& o) {
  const std::uint64_t seed = derive_seed(o.config.master_seed, 3);
  CriterionResult r;
  std::vector<double> ratio(50, 0.0);
  std::vector<char> exact_alpha(50, 0);
  Audit a = run_cases(50, o.threads, [&](std::size_t i) {
    Audit a;
    Rng rng(derive_seed(seed, i));
    const int n = between(rng, 2, 50);
    const auto p = i % 2 ? fixtures::random_connected_chain(n, rng())
                         : fixtures::planted_blocks({n / 2, n - n / 2}, 0.005 + 0.1 * rng.uniform(), rng());
    bool exact = false;
    const double alpha = cheeger_upper(p, exact);
    exact_alpha[i] = exact;
    const double hit = hitting_time_exact(p);
    const double bound = 10.0 * n * std::log(10.0 * n) / (alpha * alpha);
    ratio[i] = hit / bound;
    a.expect(hit <= bound, [&] {
      return "HitT = " + fmt(hit) + " exceeds " + fmt(bound) + " at n=" + std::to_string(n) + ", h <= " + fmt(alpha);
    });
    return a;
  });
  const double h2 = hitting_time_exact(fixtures::uniform_chain(2)), h3 = hitting_time_exact(fixtures::uniform_chain(3));
  a.expect(std::abs(h2 - 2.0) <= 1e-8, [&] { return "HitT(n=2 uniform) = " + fmt(h2); });
  a.expect(std::abs(h3 - 3.0) <= 1e-8, [&] { return "HitT(n=3 uniform) = " + fmt(h3); });
  r.measured["instances"] = 50;
  r.measured["instances_with_exact_cheeger"] = std::count(exact_alpha.begin(), exact_alpha.end(), 1);
  r.measured["violations"] = a.violations;
  r.measured["max_ratio_to_bound"] = *std::max_element(ratio.begin(), ratio.end());
  r.measured["hit_uniform_2"] = h2;
  r.measured["hit_uniform_3"] = h3;
  r.passed = a.violations == 0;
  r.failure = a.first;
  return r;
}

// ----- 4: LP relaxation and rounding -----

CriterionResult lp_rounding(const SuiteOptions& o) {
  const std::uint64_t seed = derive_seed(o.config.master_seed, 4);
  const Constants& k = o.config.constants;
  CriterionResult r;
  constexpr std::size_t kRandom = 50, kPlanted = 10;
  std::vector<double> ratio(kRandom + kPlanted, 0.0), gap(kRandom + kPlanted, 0.0);
  std::vector<char> with_t(kRandom + kPlanted, 0);
  Audit a = run_cases(kRandom + kPlanted, o.threads, [&](std::size_t i) {
    Audit a;
    Rng rng(derive_seed(seed, i));
    const int n = between(rng, 3, 12);
    StochasticMatrix p = i < kRandom ? fixtures::random_chain(n, rng(), 0.3 + 0.7 * rng.uniform())
                                     : fixtures::planted_blocks({n / 2, n - n / 2}, 0.001 + 0.02 * rng.uniform(), rng());
    StateSubset T = StateSubset::empty(n);
    if (i % 2) T = fixtures::random_subset(n, between(rng, 1, n - 2), rng());
    with_t[i] = !T.empty();
    const auto full = StateSubset::full(n);
    const auto opt = oracle::sparsest_cut_exact(p, full, T);
    const auto sol = solve_metric(p, T);
    gap[i] = sol.value - opt.value;
    a.expect(sol.value <= opt.value + 1e-6, [&] {
      return "LP value " + fmt(sol.value) + " above optimum " + fmt(opt.value) + " (n=" + std::to_string(n) +
             ", T=" + T.to_string() + ")";
    });
    const auto fc = find_comp(p, full, T, rng(), k);
    a.expect(fc.cut.disjoint(T), [&] { return "find_comp cut " + fc.cut.to_string() + " meets T=" + T.to_string(); });
    a.expect(std::abs(fc.cut_value - cut_value(p, fc.cut)) <= 1e-12, [] { return std::string("cut value misreported"); });
    const double allowance = k.C_fc * std::log(static_cast<double>(n));
    ratio[i] = opt.value > 0.0 ? fc.cut_value / opt.value : (fc.cut_value > 1e-12 ? INFINITY : 1.0);
    a.expect(fc.cut_value <= allowance * opt.value + 1e-12, [&] {
      return "find_comp g = " + fmt(fc.cut_value) + " vs optimum " + fmt(opt.value) + " (n=" + std::to_string(n) + ")";
    });
    return a;
  });
  r.measured["instances"] = kRandom + kPlanted;
  r.measured["instances_with_T"] = std::count(with_t.begin(), with_t.end(), 1);
  r.measured["violations"] = a.violations;
  r.measured["max_lp_minus_optimum"] = *std::max_element(gap.begin(), gap.end());
  r.measured["max_approximation_ratio"] = *std::max_element(ratio.begin(), ratio.end());
  r.passed = a.violations == 0;
  r.failure = a.first;
  return r;
}

// ----- 5: partition guarantees -----

CriterionResult partition_guarantees(const SuiteOptions& o) {
  const std::uint64_t seed = derive_seed(o.config.master_seed, 5);
  const Constants& k = o.config.constants;
  CriterionResult r;
  std::vector<char> nonempty_t(20, 0);
  std::vector<double> min_internal(20, 1.0);
  Audit planted = run_cases(20, o.threads, [&](std::size_t i) {
    Audit a;
    Rng rng(derive_seed(seed, {0, i}));
    const double beta = i % 2 ? 0.1 : 0.05;
    StochasticMatrix p = fixtures::uniform_chain(1);
    if (i % 4 == 3) {
      // Two blocks and a leaky region, so that T is exercised.
      p = fixtures::three_region_chain(between(rng, 3, 6), between(rng, 1, 4), beta / 20.0 * (1.0 + rng.uniform()));
    } else {
      std::vector<int> sizes;
      int total = 0;
      for (int b = between(rng, 2, 4); b > 0; --b) {
        const int s = between(rng, 1, std::max(1, std::min(6, 16 - total - (b - 1))));
        sizes.push_back(s);
        total += s;
      }
      p = fixtures::planted_blocks(sizes, 0.02 * beta * rng.uniform(), rng());
    }
    const int n = p.size();
    const Partition part = partition_graph(p, beta, rng(), k);
    try {
      part.validate(n);
    } catch (const std::exception& e) {
      a.expect(false, [&] { return std::string("structure: ") + e.what(); });
      return a;
    }
    nonempty_t[i] = !part.low_info.empty();
    for (std::size_t s = 0; s < part.high_info.size(); ++s) {
      const auto& S = part.high_info[s];
      const double mass = internal_mass_ratio(p, S);
      min_internal[i] = std::min(min_internal[i], mass);
      a.expect(mass >= 1.0 - beta, [&] { return "internal mass " + fmt(mass) + " of " + S.to_string(); });
      const double inner = oracle::min_internal_expansion_exact(p, S);
      a.expect(inner >= part.claim2_floors[s], [&] {
        return "sub-cut expansion " + fmt(inner) + " below floor " + fmt(part.claim2_floors[s]) + " in " + S.to_string();
      });
    }
    a.expect(oracle::low_info_claim_check(p, part.low_info, part.claim3_floor), [&] {
      return "low-information set " + part.low_info.to_string() + " escapes slower than " + fmt(part.claim3_floor);
    });
    return a;
  });

  Audit structural = run_cases(200, o.threads, [&](std::size_t i) {
    Audit a;
    Rng rng(derive_seed(seed, {1, i}));
    const int n = between(rng, 1, 16);
    const double beta = 0.02 + 0.2 * rng.uniform();
    const auto p = i % 2 ? fixtures::random_chain(n, rng(), 0.1 + 0.9 * rng.uniform())
                         : fixtures::planted_blocks({(n + 1) / 2, n / 2 > 0 ? n / 2 : 0}, 0.05 * rng.uniform(), rng());
    const Partition part = partition_graph(p, beta, rng(), k);
    try {
      part.validate(n);
    } catch (const std::exception& e) {
      a.expect(false, [&] { return std::string("structure: ") + e.what(); });
    }
    a.expect(part.high_info.size() <= static_cast<std::size_t>(n), [] { return std::string("too many components"); });
    for (const auto& S : part.high_info) {
      const double mass = internal_mass_ratio(p, S);
      a.expect(mass >= 1.0 - beta, [&] { return "internal mass " + fmt(mass) + " of " + S.to_string(); });
    }
    return a;
  });

  r.measured["planted"] = audit_json(planted);
  r.measured["planted"]["instances_with_low_info"] = std::count(nonempty_t.begin(), nonempty_t.end(), 1);
  r.measured["planted"]["min_internal_mass"] = *std::min_element(min_internal.begin(), min_internal.end());
  r.measured["structural"] = audit_json(structural);
  Audit all = planted;
  all.merge(structural);
  r.passed = all.violations == 0;
  r.failure = all.first;
  return r;
}

// ----- 6: sampler fidelity -----

CriterionResult sampler(const SuiteOptions& o) {
  const std::uint64_t seed = derive_seed(o.config.master_seed, 6);
  CriterionResult r;
  constexpr std::size_t kInstances = 10;
  std::vector<double> tv(kInstances, 0.0);
  Audit fidelity = run_cases(kInstances, o.threads, [&](std::size_t i) {
    Audit a;
    Rng rng(derive_seed(seed, i));
    const auto p = fixtures::random_connected_chain(4, rng());
    const auto T = fixtures::random_subset(4, 2, rng());
    LazyTrajectory w(p, static_cast<State>(rng.below(4)), rng(), o.config.trajectory_cap);
    const auto gen = generate_iid_samples(w, T, 10'000, rng());
    if (!gen.samples) {
      a.expect(false, [] { return std::string("generation failed on the infinite word"); });
      return a;
    }
    const Eigen::VectorXd emp = gen.samples->histogram() / static_cast<double>(gen.samples->size());
    const auto ref = edge_distribution(p, T);
    tv[i] = 0.5 * (emp - ref.probs()).cwiseAbs().sum();
    a.expect(gen.samples->size() == 10'000, [] { return std::string("wrong sample count"); });
    a.expect(tv[i] <= 0.05, [&] { return "TV " + fmt(tv[i]) + " for T=" + T.to_string(); });
    return a;
  });

  Audit traced;
  {
    // Alternating chain, both states requested once.
    const Trajectory w{{0, 1, 0, 1, 0}, 0, 2};
    const StateSubset T({0, 1}, 2);
    const auto g = generate_with_requests(w, T, {1, 1});
    const EdgeDistribution ed = edge_distribution(StochasticMatrix{{0, 1}, {1, 0}}, T);
    traced.expect(g.samples && g.samples->outcomes == std::vector<int>{ed.index(0, 1), ed.index(1, 0)},
                  [] { return std::string("alternating trace: expected {(0,1),(1,0)}"); });
  }
  {
    const Trajectory w{{0}, 0, 2};
    const auto g = generate_iid_samples(w, StateSubset({0, 1}, 2), 1, seed);
    traced.expect(!g.samples, [] { return std::string("length-1 word must fail"); });
  }
  {
    const Trajectory w{{0, 2, 0}, 0, 3};
    const StateSubset T({0}, 3);
    const auto g = generate_with_requests(w, T, {1});
    traced.expect(g.samples && g.samples->outcomes == std::vector<int>{1},
                  [] { return std::string("exit trace: expected {eta}"); });
  }

  r.measured["instances"] = kInstances;
  r.measured["max_tv"] = *std::max_element(tv.begin(), tv.end());
  r.measured["traced_examples"] = audit_json(traced);
  Audit all = fidelity;
  all.merge(traced);
  r.passed = all.violations == 0;
  r.failure = all.first;
  return r;
}

// ----- 7: Hellinger separation -----

// A chain at distance at least eps from p, as close to eps as bisection on a mixture allows.
// Pairs states along the lightest entries of p; with n odd the leftover state joins one
// pair as a triangle of weight 1/2 edges. Against a permutation chain the distance is
// 1 - max sqrt(p_i,sigma(i)), so light pairs give a far target.
StochasticMatrix light_matching(const StochasticMatrix& p) {
  const int n = p.size();
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  std::vector<std::pair<int, int>> pairs, matched;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  std::stable_sort(pairs.begin(), pairs.end(),
                   [&](auto x, auto y) { return p(x.first, x.second) < p(y.first, y.second); });
  for (auto [i, j] : pairs) {
    if (used[i] || used[j]) continue;
    used[i] = used[j] = 1;
    matched.emplace_back(i, j);
  }
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
  for (auto [i, j] : matched) q(i, j) = q(j, i) = 1.0;
  if (n == 1) q(0, 0) = 1.0;
  if (n % 2 && !matched.empty()) {
    const int u = static_cast<int>(std::find(used.begin(), used.end(), 0) - used.begin());
    auto cost = [&](std::pair<int, int> e) { return std::max(p(u, e.first), p(u, e.second)); };
    const auto e = *std::min_element(matched.begin(), matched.end(), [&](auto x, auto y) { return cost(x) < cost(y); });
    for (int a : {u, e.first, e.second})
      for (int b : {u, e.first, e.second})
        if (a != b) q(a, b) = 0.5;
  }
  return StochasticMatrix(std::move(q));
}

std::optional<StochasticMatrix> far_partner(const StochasticMatrix& p, double eps, Rng& rng) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    const auto target = attempt == 0 ? light_matching(p) : fixtures::random_matching_chain(p.size(), rng());
    if (chain_distance(p, target) < eps) continue;
    auto mix = [&](double t) { return StochasticMatrix((1.0 - t) * p.matrix() + t * target.matrix()); };
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 40; ++it) {
      const double mid = 0.5 * (lo + hi);
      (chain_distance(p, mix(mid)) >= eps ? hi : lo) = mid;
    }
    return mix(hi);
  }
  return std::nullopt;
}

CriterionResult hellinger(const SuiteOptions& o) {
  const std::uint64_t seed = derive_seed(o.config.master_seed, 7);
  const double eps = 0.3, beta = eps / 16.0, floor = eps * eps / 32.0;
  CriterionResult r;
  std::vector<double> min_hel(20, INFINITY), dist(20, 0.0);
  std::vector<int> parts(20, 0);
  Audit a = run_cases(20, o.threads, [&](std::size_t i) {
    Audit a;
    Rng rng(derive_seed(seed, i));
    const int n = between(rng, 4, 16);
    const auto p = i % 2 ? fixtures::planted_blocks({n / 2, n - n / 2}, 0.002 * rng.uniform(), rng())
                         : fixtures::random_chain(n, rng(), 0.5 + 0.5 * rng.uniform());
    const auto q = far_partner(p, eps, rng);
    if (!q) {
      a.expect(false, [&] { return "no chain at distance " + fmt(eps) + " found for instance " + std::to_string(i); });
      return a;
    }
    dist[i] = chain_distance(p, *q);
    a.expect(dist[i] >= eps, [&] { return "constructed pair at distance " + fmt(dist[i]); });
    const Partition part = partition_graph(p, beta, rng(), o.config.constants);
    parts[i] = static_cast<int>(part.high_info.size());
    for (const auto& S : part.high_info) {
      const double h = hellinger_sq(edge_distribution(p, S).distribution(), edge_distribution(*q, S).distribution());
      const auto exact = oracle::edge_distribution_distance_exact(p, *q, S);
      a.expect(std::abs(h - exact.hel_sq) <= 1e-12, [&] { return "edge distribution mismatch on " + S.to_string(); });
      min_hel[i] = std::min(min_hel[i], h);
      a.expect(h >= floor, [&] { return "d_Hel^2 = " + fmt(h) + " < eps^2/32 on " + S.to_string(); });
    }
    return a;
  });
  r.measured["pairs"] = 20;
  r.measured["components_checked"] = std::accumulate(parts.begin(), parts.end(), 0);
  r.measured["violations"] = a.violations;
  r.measured["min_distance"] = *std::min_element(dist.begin(), dist.end());
  r.measured["min_hellinger_sq"] = *std::min_element(min_hel.begin(), min_hel.end());
  r.measured["floor"] = floor;
  r.passed = a.violations == 0;
  r.failure = a.first;
  return r;
}

// ----- 8: statistical bounds -----

CriterionResult statistical(const SuiteOptions& o) {
  const std::uint64_t seed = derive_seed(o.config.master_seed, 8);
  CriterionResult r;

  const int k = 8, n_hist = 64;
  const double eps_hist = 0.1;
  const long m = static_cast<long>(std::ceil(10.0 * k * std::log(n_hist / eps_hist)));
  std::vector<char> hist_ok(1000, 0);
  parallel_for(hist_ok.size(), o.threads, [&](std::size_t t) {
    Rng rng(derive_seed(seed, {0, t}));
    std::vector<long> cells(k, 0);
    for (long s = 0; s < m; ++s) ++cells[rng.below(k)];
    hist_ok[t] = *std::max_element(cells.begin(), cells.end()) <= 2.0 * m / k;
  });
  const long hist_pass = std::count(hist_ok.begin(), hist_ok.end(), 1);

  // Escape bound on a T whose escape floor alpha is certified by enumeration.
  const int n = 8;
  const double delta = 0.1;
  const auto p = fixtures::random_connected_chain(n, derive_seed(seed, 1));
  const auto T = fixtures::random_subset(n, 4, derive_seed(seed, 2));
  const double alpha = oracle::min_escape_ratio_exact(p.matrix(), T);
  const std::size_t l = static_cast<std::size_t>(std::ceil(16.0 * std::log(n) * std::log(1.0 / delta) / (alpha * alpha)));
  const double need = l * alpha * alpha / (8.0 * std::log(n));
  std::vector<char> esc_ok(200, 0);
  std::vector<std::size_t> escapes(200, 0);
  parallel_for(esc_ok.size(), o.threads, [&](std::size_t t) {
    const auto w = simulate_from(p, T[0], l, derive_seed(seed, {3, t}));
    escapes[t] = escape_count(w, T);
    esc_ok[t] = static_cast<double>(escapes[t]) >= need;
  });
  const long esc_pass = std::count(esc_ok.begin(), esc_ok.end(), 1);
  const double esc_rate = esc_pass / 200.0;

  r.measured["histogram"] = {{"k", k}, {"m", m}, {"trials", 1000}, {"held", hist_pass}, {"required_rate", 0.99}};
  r.measured["escape"] = {{"n", n},
                          {"T", T.members()},
                          {"alpha", alpha},
                          {"delta", delta},
                          {"length", l},
                          {"required_escapes", need},
                          {"min_escapes", *std::min_element(escapes.begin(), escapes.end())},
                          {"trials", 200},
                          {"held", esc_pass},
                          {"required_rate", 1.0 - delta - 0.02}};
  const bool hist_good = hist_pass >= 990, esc_good = esc_rate >= 1.0 - delta - 0.02;
  r.passed = hist_good && esc_good;
  if (!hist_good) r.failure = "histogram bound held in " + std::to_string(hist_pass) + "/1000 trials";
  else if (!esc_good) r.failure = "escape bound held in " + std::to_string(esc_pass) + "/200 trials";
  return r;
}

// ----- 9: end-to-end -----

struct CaseOutcome {
  int correct = 0;
  int trials = 0;
  int generation_failures = 0;
};

CaseOutcome run_case(const StochasticMatrix& truth, const StochasticMatrix& reference, const Partition& part,
                     std::size_t length, double eps, Decision expected, std::uint64_t seed, const SuiteOptions& o,
                     std::vector<double>* demand_ratio) {
  const int trials = o.config.trials;
  std::vector<char> correct(static_cast<std::size_t>(trials), 0), failed(static_cast<std::size_t>(trials), 0);
  if (demand_ratio) demand_ratio->assign(static_cast<std::size_t>(trials), INFINITY);
  const int n = truth.size();
  parallel_for(static_cast<std::size_t>(trials), o.threads, [&](std::size_t t) {
    const auto w = simulate(truth, Distribution::uniform(n), length, derive_seed(seed, {0, t}));
    const std::uint64_t test_seed = derive_seed(seed, {1, t});
    const Verdict v = identity_test_chain(w, reference, part, eps, test_seed, o.config.constants);
    correct[t] = v.value == expected;
    failed[t] = v.reason == "AllGenerationFailed";
    if (demand_ratio && !part.high_info.empty()) {
      // Visits to the first component consumed by the generator, against c_N |S| ln^2 n / eps^2.
      const auto& S = part.high_info.front();
      const auto gen = generate_iid_samples(w, S, samples_per_component(S.size(), n, eps, o.config.constants),
                                            derive_seed(test_seed, {1, 0}));
      const double ln = log_floor1(n);
      if (gen.samples)
        (*demand_ratio)[t] = gen.positions_used / (o.config.constants.c_N * S.size() * ln * ln / (eps * eps));
    }
  });
  CaseOutcome out;
  out.trials = trials;
  out.correct = static_cast<int>(std::count(correct.begin(), correct.end(), 1));
  out.generation_failures = static_cast<int>(std::count(failed.begin(), failed.end(), 1));
  return out;
}

nlohmann::ordered_json case_json(const CaseOutcome& c) {
  return {{"correct", c.correct}, {"trials", c.trials}, {"generation_failures", c.generation_failures}};
}

CriterionResult end_to_end(const SuiteOptions& o) {
  const std::uint64_t seed = derive_seed(o.config.master_seed, 9);
  const io::ExperimentConfig& cfg = o.config;
  const double eps = cfg.eps, beta = cfg.beta();
  const std::vector<int> offsets{1, -1, 2, -2};
  const int n = 24;
  CriterionResult r;
  const int need = static_cast<int>(std::ceil(0.6 * cfg.trials));

  const auto p = fixtures::two_block_chain(n, 0.001);
  const auto q = fixtures::circulant_two_block_chain(n, 0.001, offsets);
  const std::size_t m = trajectory_length(n, eps, cfg.constants);
  const Partition part = partition_graph(p, beta, derive_seed(seed, 0), cfg.constants);
  std::vector<double> demand;
  const auto null_case = run_case(p, p, part, m, eps, Decision::Same, derive_seed(seed, 1), o, &demand);
  const auto far_case = run_case(q, p, part, m, eps, Decision::Different, derive_seed(seed, 2), o, nullptr);
  const long demand_ok = std::count_if(demand.begin(), demand.end(), [](double v) { return v <= 1.0; });

  const auto pb = fixtures::bridge_chain(n, 1e-4);
  const auto qb = fixtures::circulant_bridge_chain(n, 1e-4, offsets);
  const double hit = hitting_time_exact(pb);
  const std::size_t m_stress = 10'000;
  const Partition part_b = partition_graph(pb, beta, derive_seed(seed, 3), cfg.constants);
  const auto stress_null = run_case(pb, pb, part_b, m_stress, eps, Decision::Same, derive_seed(seed, 4), o, nullptr);
  const auto stress_far = run_case(qb, pb, part_b, m_stress, eps, Decision::Different, derive_seed(seed, 5), o, nullptr);

  auto part_json = [](const Partition& pt) {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& s : pt.high_info) j.push_back(s.members());
    return j;
  };
  r.measured["eps"] = eps;
  r.measured["beta"] = beta;
  r.measured["required_correct"] = need;
  r.measured["two_block"] = {{"n", n},
                             {"distance", chain_distance(p, q)},
                             {"trajectory_length", m},
                             {"components", part_json(part)},
                             {"null", case_json(null_case)},
                             {"far", case_json(far_case)},
                             {"sample_demand_within_bound", demand_ok},
                             {"sample_demand_max_ratio", *std::max_element(demand.begin(), demand.end())}};
  r.measured["bridge"] = {{"n", n},
                          {"distance", chain_distance(pb, qb)},
                          {"hitting_time", hit},
                          {"trajectory_length", m_stress},
                          {"components", part_json(part_b)},
                          {"null", case_json(stress_null)},
                          {"far", case_json(stress_far)}};

  std::vector<std::pair<bool, std::string>> checks{
      {chain_distance(p, q) >= eps, "far two-block chain closer than eps"},
      {null_case.correct >= need, "null case: " + std::to_string(null_case.correct) + " Same verdicts"},
      {far_case.correct >= need, "far case: " + std::to_string(far_case.correct) + " Different verdicts"},
      {demand_ok >= std::ceil(0.9 * cfg.trials), "sample demand bound held in " + std::to_string(demand_ok) + " trials"},
      {hit >= 1e5, "bridge chain hitting time " + fmt(hit) + " below 1e5"},
      {m_stress * 10 <= static_cast<std::size_t>(hit), "stress trajectory not far below the hitting time"},
      {chain_distance(pb, qb) >= eps, "far bridge chain closer than eps"},
      {stress_null.correct >= need, "stress null case: " + std::to_string(stress_null.correct) + " Same verdicts"},
      {stress_far.correct >= need, "stress far case: " + std::to_string(stress_far.correct) + " Different verdicts"},
  };
  r.passed = true;
  for (const auto& [ok, why] : checks)
    if (!ok && r.passed) r.passed = false, r.failure = why;
  return r;
}

struct Entry {
  const char* name;
  double budget;
  CriterionResult (*run)(const SuiteOptions&);
};

const Entry kEntries[kCriteria] = {
    {"exactness", 10, exactness},
    {"spectral inequalities", 30, spectral},
    {"hitting-time bound", 60, hitting},
    {"LP relaxation and rounding", 300, lp_rounding},
    {"partition guarantees", 300, partition_guarantees},
    {"sampler fidelity", 120, sampler},
    {"Hellinger separation", 60, hellinger},
    {"statistical bounds", 300, statistical},
    {"end-to-end identity test", 900, end_to_end},
};

}  // namespace

CriterionResult run_criterion(int id, const SuiteOptions& options) {
  if (id < 1 || id > kCriteria) throw std::out_of_range("no criterion " + std::to_string(id));
  options.config.validate();
  const Entry& entry = kEntries[id - 1];
  const auto start = std::chrono::steady_clock::now();
  CriterionResult r;
  try {
    r = entry.run(options);
  } catch (const std::exception& e) {
    r.passed = false;
    r.failure = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.id = id;
  r.name = entry.name;
  r.budget_seconds = entry.budget;
  if (r.passed && r.seconds > r.budget_seconds) {
    r.passed = false;
    r.failure = "over time budget";
  }
  return r;
}

std::vector<CriterionResult> run_suite(const SuiteOptions& options, const std::vector<int>& ids) {
  std::vector<CriterionResult> out;
  for (int id : ids) out.push_back(run_criterion(id, options));
  return out;
}

std::string summary_line(const CriterionResult& r) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "[%s] %d %s (%.2f s / %.0f s)", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(),
                r.seconds, r.budget_seconds);
  std::string line = buf;
  if (!r.passed) line += ": " + r.failure;
  return line;
}

nlohmann::ordered_json report(const SuiteOptions& options, const std::vector<CriterionResult>& results) {
  nlohmann::ordered_json j;
  j["config"] = io::to_json(options.config);
  j["criteria"] = nlohmann::ordered_json::array();
  bool all = true;
  for (const auto& r : results) {
    nlohmann::ordered_json c;
    c["id"] = r.id;
    c["name"] = r.name;
    c["passed"] = r.passed;
    c["measured"] = r.measured;
    if (!r.passed) c["failure"] = r.failure;
    j["criteria"].push_back(std::move(c));
    all = all && r.passed;
  }
  j["all_passed"] = all;
  return j;
}

}  // namespace mcid::acceptance
