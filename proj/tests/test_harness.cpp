#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "pidkit/harness.hpp"
#include "support.hpp"

using namespace pidkit;
using pidkit::testing::error_code;

namespace {

using Symbols = std::vector<std::uint32_t>;

void check_pid_identities(const BivariatePid& p) {
  REQUIRE(std::abs(p.mi_x.value() - (p.r + p.u_x).value()) < 1e-10);
  REQUIRE(std::abs(p.mi_y.value() - (p.r + p.u_y).value()) < 1e-10);
  REQUIRE(std::abs(p.mi_xy.value() - (p.r + p.u_x + p.u_y + p.s).value()) < 1e-10);
}

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.batches = 3;
  c.n_per_batch = 120;
  c.beta_grid = {0.5, 4.0};
  c.alpha_grid = {-2.0, 2.0};
  c.seed = 9;
  return c;
}

std::string csv_of(const ExperimentResult& r, PidKind kind) {
  std::ostringstream out;
  write_pairs_csv(r, kind, out);
  return out.str();
}

}  // namespace

TEST_SUITE("discretization") {
  TEST_CASE("one point per bin") {
    const std::vector<double> v = {0.0, 1.0, 2.0};
    const auto d = discretize_equal_width(v, 3);
    CHECK(d.symbols == Symbols{0, 1, 2});
    CHECK(d.bins.n_bins == 3);
    CHECK(d.bins.edges.size() == 4);
    CHECK(d.bins.edges.front() == 0.0);
    CHECK(d.bins.edges.back() == 2.0);
  }

  TEST_CASE("midpoint split") {
    const std::vector<double> v = {0.0, 0.4, 0.6, 1.0};
    CHECK(discretize_equal_width(v, 2).symbols == Symbols{0, 0, 1, 1});
    const std::vector<double> edge = {0.0, 0.5, 1.0};
    CHECK(discretize_equal_width(edge, 2).symbols == Symbols{0, 1, 1});
  }

  TEST_CASE("maximum never overflows") {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> z;
    for (int k = 0; k < 100; ++k) {
      std::vector<double> v(50);
      for (auto& x : v) x = z(rng);
      for (std::size_t bins = 2; bins <= 7; ++bins) {
        const auto d = discretize_equal_width(v, bins);
        const auto mx = std::max_element(v.begin(), v.end()) - v.begin();
        const auto mn = std::min_element(v.begin(), v.end()) - v.begin();
        CHECK(d.symbols[mx] == bins - 1);
        CHECK(d.symbols[mn] == 0);
        for (std::size_t e = 1; e < d.bins.edges.size(); ++e) CHECK(d.bins.edges[e] > d.bins.edges[e - 1]);
        for (std::size_t i = 0; i < v.size(); ++i) {
          const auto s = d.symbols[i];
          CHECK(v[i] >= d.bins.edges[s]);
          if (s + 1 < bins) CHECK(v[i] < d.bins.edges[s + 1]);
        }
      }
    }
  }

  TEST_CASE("degenerate inputs") {
    const std::vector<double> flat = {2.0, 2.0, 2.0};
    CHECK(error_code([&] { discretize_equal_width(flat, 3); }) == ErrorCode::DegenerateInput);
    CHECK(error_code([] { discretize_equal_width(std::vector<double>{}, 3); }) == ErrorCode::DegenerateInput);
    const std::vector<double> ok = {0.0, 1.0};
    CHECK(error_code([&] { discretize_equal_width(ok, 1); }) == ErrorCode::InvalidArgument);
    const std::vector<double> bad = {0.0, NAN};
    CHECK(error_code([&] { discretize_equal_width(bad, 2); }) == ErrorCode::DegenerateInput);
  }
}

TEST_SUITE("empirical joint") {
  TEST_CASE("single sample") {
    const Symbols x = {1}, y = {0}, t = {2};
    const auto j = empirical_joint3(x, y, t);
    CHECK(j.at(1, 0, 2) == 1.0);
  }

  TEST_CASE("two-bit copy pattern") {
    const Symbols x = {0, 0, 1, 1}, y = {0, 1, 0, 1}, t = {0, 1, 2, 3};
    const auto j = empirical_joint3(x, y, t);
    const auto ref = testing::two_bit_copy();
    CHECK(std::ranges::equal(j.table(), ref.table()));
  }

  TEST_CASE("copy relation gives MI equal to entropy") {
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<std::uint32_t> sym(0, 3);
    Symbols x(500), y(500);
    for (auto& v : x) v = sym(rng);
    for (auto& v : y) v = sym(rng);
    const auto j = empirical_joint3(x, y, x);
    CHECK(std::abs(mutual_information(j.marginal_xt()) - entropy(j.marginal_x())) < 1e-12);
  }

  TEST_CASE("explicit alphabet sizes and errors") {
    const Symbols x = {0, 1}, y = {0, 0}, t = {1, 1};
    const auto j = empirical_joint3(x, y, t, 3, 2, 4);
    size_t total = j.table().size();
    CHECK(total == 3 * 2 * 4);
    const Symbols shorter = {0};
    CHECK(error_code([&] { empirical_joint3(x, shorter, t); }) == ErrorCode::InvalidArgument);
    CHECK(error_code([&] { empirical_joint3(Symbols{}, Symbols{}, Symbols{}); }) == ErrorCode::InvalidArgument);
    CHECK(error_code([&] { empirical_joint3(x, y, t, 1, 2, 2); }) == ErrorCode::Alphabet);
  }
}

TEST_SUITE("ranks") {
  TEST_CASE("examples") {
    CHECK(rank_scores(std::vector<double>{1.0, 2.0, 3.0}) == std::vector<double>{0.0, 0.5, 1.0});
    CHECK(rank_scores(std::vector<double>{5.0, 5.0}) == std::vector<double>{0.5, 0.5});
    CHECK(rank_scores(std::vector<double>{3.0, 1.0, 2.0, 2.0}) == std::vector<double>{1.0, 0.0, 0.5, 0.5});
  }

  TEST_CASE("invariant under increasing transforms") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> coarse(0, 20);
    for (int k = 0; k < 100; ++k) {
      std::vector<double> v(40), w(40);
      for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = coarse(rng) / 4.0;
        w[i] = std::exp(v[i]);
      }
      const auto r = rank_scores(v);
      CHECK(r == rank_scores(w));
      for (std::size_t i = 0; i < v.size(); ++i) {
        for (std::size_t j = 0; j < v.size(); ++j) {
          if (v[i] < v[j]) REQUIRE(r[i] < r[j]);
          if (v[i] == v[j]) REQUIRE(r[i] == r[j]);
        }
      }
    }
  }

  TEST_CASE("needs two values") {
    CHECK(error_code([] { rank_scores(std::vector<double>{1.0}); }) == ErrorCode::InvalidArgument);
  }

  TEST_CASE("quartile summary") {
    const auto s = summarize({4.0, 1.0, 3.0, 2.0});
    CHECK(s.median == 2.5);
    CHECK(s.q1 == 1.75);
    CHECK(s.q3 == 3.25);
    CHECK(s.count == 4);
  }

  TEST_CASE("pearson correlation") {
    const std::vector<double> a = {1.0, 2.0, 3.0, 4.0};
    const std::vector<double> b = {2.0, 4.0, 6.0, 8.0};
    const std::vector<double> c = {4.0, 3.0, 2.0, 1.0};
    CHECK(std::abs(pearson_correlation(a, b) - 1.0) < 1e-15);
    CHECK(std::abs(pearson_correlation(a, c) + 1.0) < 1e-15);
  }
}

TEST_SUITE("pair scans") {
  TEST_CASE("network B: one true pair among 1225") {
    const auto net = network_b(0.0, 1.0, 1);
    const auto batch = sample(net, 200, 4);
    const auto pairs = pairwise_pid_scan(net, batch, 3, 6);
    REQUIRE(pairs.size() == 1225);
    std::size_t flagged = 0;
    for (const auto& p : pairs) {
      CHECK(p.batch == 6);
      CHECK(p.i != p.j);
      if (p.is_interaction) {
        ++flagged;
        CHECK(p.i == 1);
        CHECK(p.j == kNetworkBHub1);
      }
      check_pid_identities(p.imin);
      check_pid_identities(p.ipm);
      CHECK(p.imin.kind == PidKind::Imin);
      CHECK(p.ipm.kind == PidKind::Ipm);
      CHECK(std::abs(p.imin.mi_xy.value() - p.mi_xy) < 1e-12);
      for (const ExtReal& a : {p.imin.r, p.imin.u_x, p.imin.u_y, p.imin.s}) REQUIRE(a.value() >= -1e-12);
    }
    CHECK(flagged == 1);

    const auto ranks = rank_pairs(pairs);
    CHECK(ranks.mi.size() == 1225);
    CHECK(ranks.imin.s.size() == 1225);
    CHECK(*std::max_element(ranks.ipm.r.begin(), ranks.ipm.r.end()) <= 1.0);
  }

  TEST_CASE("pair orientation puts the hub in Y") {
    const auto net = network_a(0.0);
    const auto pairs = pairwise_pid_scan(net, sample(net, 100, 5), 3);
    for (const auto& p : pairs) {
      if (p.i == 0 || p.j == 0) {
        const std::size_t other = p.i == 0 ? p.j : p.i;
        if (other >= 1 && other <= 4) CHECK(p.j == 0);
      }
      if (!(net.is_interaction_pair(p.i, p.j))) CHECK(p.is_interaction == false);
    }
  }
}

TEST_SUITE("experiments") {
  TEST_CASE("experiment 1 at desk scale ranks interactions high") {
    ExperimentConfig c;
    c.seed = 1;
    const auto r = run_experiment_1(c);
    CHECK(r.scans.size() == 20);
    for (const auto& ns : r.exp1) {
      if (ns.statistic == "S_pm" || ns.statistic == "MI") {
        CAPTURE(ns.statistic);
        CHECK(ns.split.interaction.median > 0.90);
        CHECK(ns.split.interaction.count == 80);
        CHECK(ns.split.other.count == 20 * 1221);
      }
    }
  }

  TEST_CASE("false pairs carry less unsigned unique and synergistic information") {
    ExperimentConfig c;
    c.seed = 2;
    c.beta_grid = {1.0};
    const auto r = run_experiment_2(c);
    std::vector<double> ux_true, ux_false, s_true, s_false;
    for (const auto& scan : r.scans) {
      for (const auto& p : scan.pairs) {
        if (p.is_interaction) {
          ux_true.push_back(p.imin.u_x.value());
          s_true.push_back(p.imin.s.value());
        } else if (p.j == kNetworkBHub2 && p.i > kNetworkBHub2) {
          ux_false.push_back(p.imin.u_x.value());
          s_false.push_back(p.imin.s.value());
        }
      }
    }
    CHECK(ux_false.size() == 10 * c.batches);
    CHECK(summarize(ux_false).median < summarize(ux_true).median);
    CHECK(summarize(s_false).median < summarize(s_true).median);
  }

  TEST_CASE("results do not depend on the worker count") {
    auto c = small_config();
    for (int id = 1; id <= 3; ++id) {
      CAPTURE(id);
      c.workers = 1;
      const auto a = run_experiment(id, c);
      c.workers = 3;
      const auto b = run_experiment(id, c);
      CHECK(csv_of(a, PidKind::Imin) == csv_of(b, PidKind::Imin));
      CHECK(csv_of(a, PidKind::Ipm) == csv_of(b, PidKind::Ipm));
      CHECK(summary_json(a).dump() == summary_json(b).dump());
    }
  }

  TEST_CASE("csv layout") {
    auto c = small_config();
    const auto r = run_experiment_2(c);
    const auto text = csv_of(r, PidKind::Imin);
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    CHECK(line.rfind("#", 0) == 0);
    std::getline(in, line);
    CHECK(line == "batch,i,j,is_interaction,kind,R,U_X,U_Y,S,MI,rank_R,rank_U_X,rank_U_Y,rank_S,rank_MI,grid_value");
    std::size_t rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 1225 * c.batches * c.beta_grid.size());

    const auto j = summary_json(r);
    CHECK(j.contains("comparisons"));
    CHECK(j["config"]["experiment"] == 2);
  }

  TEST_CASE("custom networks only for experiment 1") {
    auto c = small_config();
    c.network = std::make_shared<const InteractionNetwork>(network_b(0.0, 1.0, 2));
    const auto r = run_experiment_1(c);
    std::size_t flagged = 0;
    for (const auto& p : r.scans.front().pairs) flagged += p.is_interaction;
    CHECK(flagged == 2);
    CHECK(error_code([&] { run_experiment_2(c); }) == ErrorCode::InvalidArgument);
    CHECK(error_code([&] { run_experiment(4, small_config()); }) == ErrorCode::InvalidArgument);
  }
}
