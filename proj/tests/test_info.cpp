#include <doctest.h>

#include <cmath>
#include <random>

#include "pidkit/error.hpp"
#include "pidkit/info.hpp"
#include "support.hpp"

using namespace pidkit;
using pidkit::testing::kLn2;

namespace {

// H(0.25, 0.75) and the binary entropy at 0.1, evaluated to 30 digits.
constexpr double kH025 = 0.562335144618808350;
constexpr double kH01 = 0.325082973391448240;

DiscreteJoint2 copy_bits() { return DiscreteJoint2::from_table(2, 2, {0.5, 0.0, 0.0, 0.5}); }

}  // namespace

TEST_SUITE("entropy") {
  TEST_CASE("uniform over two symbols") { CHECK(entropy(DiscreteDist::uniform(2)) == doctest::Approx(kLn2).epsilon(1e-15)); }

  TEST_CASE("point mass") { CHECK(entropy(DiscreteDist::from_probs({0.0, 1.0, 0.0})) == 0.0); }

  TEST_CASE("quarter / three quarters") {
    CHECK(std::abs(entropy(DiscreteDist::from_probs({0.25, 0.75})) - kH025) < 1e-15);
  }

  TEST_CASE("uniform over n is ln n") {
    for (std::size_t n = 2; n <= 10; ++n) {
      CHECK(std::abs(entropy(DiscreteDist::uniform(n)) - std::log(static_cast<double>(n))) < 1e-14);
    }
  }
}

TEST_SUITE("distribution validity") {
  TEST_CASE("small drift is renormalized") {
    const auto d = DiscreteDist::from_probs({0.5, 0.5 + 5e-10});
    CHECK(std::abs(d[0] + d[1] - 1.0) < 1e-15);
  }

  TEST_CASE("large drift is rejected") {
    CHECK_THROWS_AS(DiscreteDist::from_probs({0.5, 0.4}), Error);
    try {
      DiscreteDist::from_probs({0.5, 0.4});
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Validity);
    }
  }

  TEST_CASE("negative probability is rejected") {
    CHECK_THROWS_AS(DiscreteDist::from_probs({1.5, -0.5}), Error);
  }

  TEST_CASE("duplicate symbols are rejected") {
    CHECK_THROWS_AS(DiscreteDist({"a", "a"}, {0.5, 0.5}), Error);
  }

  TEST_CASE("table size must match alphabets") {
    CHECK_THROWS_AS(DiscreteJoint3::from_table(2, 2, 2, std::vector<double>(7, 1.0 / 7)), Error);
  }

  TEST_CASE("symbol lookup") {
    const DiscreteDist d({"lo", "hi"}, {0.3, 0.7});
    CHECK(d.index_of("hi") == 1);
    CHECK_THROWS_AS(d.index_of("mid"), Error);
  }
}

TEST_SUITE("conditional entropy") {
  TEST_CASE("independent product gives H(X)") {
    const auto j = DiscreteJoint2::from_table(2, 2, {0.25 * 0.4, 0.25 * 0.6, 0.75 * 0.4, 0.75 * 0.6});
    CHECK(std::abs(conditional_entropy(j) - kH025) < 1e-14);
  }

  TEST_CASE("copy gives zero") { CHECK(conditional_entropy(copy_bits()) == doctest::Approx(0.0)); }

  TEST_CASE("binary symmetric channel") {
    const auto j = DiscreteJoint2::from_table(2, 2, {0.45, 0.05, 0.05, 0.45});
    CHECK(std::abs(conditional_entropy(j) - kH01) < 1e-15);
  }
}

TEST_SUITE("mutual information") {
  TEST_CASE("independent product") {
    const auto j = DiscreteJoint2::from_table(2, 3, {0.1, 0.2, 0.2, 0.1, 0.2, 0.2});
    CHECK(std::abs(mutual_information(j)) < 1e-15);
  }

  TEST_CASE("copy gives ln 2") { CHECK(std::abs(mutual_information(copy_bits()) - kLn2) < 1e-15); }

  TEST_CASE("XOR target is independent of each input") {
    CHECK(std::abs(mutual_information(testing::xor_joint().marginal_xt())) < 1e-15);
  }
}

TEST_SUITE("conditional mutual information") {
  TEST_CASE("XOR triplet") { CHECK(std::abs(conditional_mi(testing::xor_joint()) - kLn2) < 1e-15); }

  TEST_CASE("fully independent") { CHECK(std::abs(conditional_mi(testing::independent_bits())) < 1e-15); }

  TEST_CASE("Markov chain X -> Y -> T") {
    // X = Y uniform; T is Y through a 0.2 flip channel.
    std::vector<double> t(8, 0.0);
    for (std::size_t v = 0; v < 2; ++v) {
      t[(v * 2 + v) * 2 + v] = 0.5 * 0.8;
      t[(v * 2 + v) * 2 + (1 - v)] = 0.5 * 0.2;
    }
    CHECK(std::abs(conditional_mi(DiscreteJoint3::from_table(2, 2, 2, t))) < 1e-15);
  }
}

TEST_SUITE("kl divergence") {
  TEST_CASE("identical distributions") {
    const auto p = DiscreteDist::from_probs({0.2, 0.3, 0.5});
    CHECK(kl_divergence(p, p) == ExtReal(0.0));
  }

  TEST_CASE("point mass against uniform") {
    const auto d = kl_divergence(DiscreteDist::from_probs({1.0, 0.0}), DiscreteDist::from_probs({0.5, 0.5}));
    REQUIRE(d.is_finite());
    CHECK(std::abs(d.value() - kLn2) < 1e-15);
  }

  TEST_CASE("absolute continuity failure is +inf") {
    CHECK(kl_divergence(DiscreteDist::from_probs({0.5, 0.5}), DiscreteDist::from_probs({1.0, 0.0})).is_pos_inf());
  }

  TEST_CASE("mismatched alphabets") {
    const DiscreteDist p({"a", "b"}, {0.5, 0.5});
    const DiscreteDist q({"a", "c"}, {0.5, 0.5});
    try {
      (void)kl_divergence(p, q);
      FAIL("expected an alphabet error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Alphabet);
    }
  }

  TEST_CASE("nonnegative, zero only for equal inputs") {
    std::mt19937_64 rng(11);
    for (int k = 0; k < 500; ++k) {
      const auto p = DiscreteDist::from_probs(testing::dirichlet(rng, 4));
      const auto q = DiscreteDist::from_probs(testing::dirichlet(rng, 4));
      const auto d = kl_divergence(p, q);
      REQUIRE(d.is_finite());
      CHECK(d.value() > 0.0);
    }
  }
}

TEST_SUITE("specific information") {
  TEST_CASE("independent pair") {
    const auto j = DiscreteJoint2::from_table(2, 2, {0.12, 0.28, 0.18, 0.42});
    CHECK(std::abs(specific_information(j, 0)) < 1e-15);
    CHECK(std::abs(specific_information(j, 1)) < 1e-15);
  }

  TEST_CASE("copy at t = 0") { CHECK(std::abs(specific_information(copy_bits(), "0") - kLn2) < 1e-15); }

  TEST_CASE("zero-probability target outcome") {
    const auto j = DiscreteJoint2::from_table(2, 3, {0.3, 0.0, 0.2, 0.1, 0.0, 0.4});
    CHECK(specific_information(j, 1) == 0.0);
  }
}

TEST_SUITE("interaction information") {
  TEST_CASE("XOR is pure synergy") { CHECK(std::abs(interaction_information(testing::xor_joint()) - kLn2) < 1e-15); }

  TEST_CASE("triple copy") { CHECK(std::abs(interaction_information(testing::triple_copy()) + kLn2) < 1e-15); }

  TEST_CASE("fully independent") { CHECK(std::abs(interaction_information(testing::independent_bits())) < 1e-15); }

  TEST_CASE("symmetric under role permutations") {
    std::mt19937_64 rng(5);
    for (int k = 0; k < 200; ++k) {
      const auto j = testing::random_joint(rng);
      // Move T into the X slot: (t, y, x).
      std::vector<double> perm(j.table().size());
      for (std::size_t x = 0; x < j.nx(); ++x)
        for (std::size_t y = 0; y < j.ny(); ++y)
          for (std::size_t t = 0; t < j.nt(); ++t) perm[(t * j.ny() + y) * j.nx() + x] = j.at(x, y, t);
      const auto jp = DiscreteJoint3::from_table(j.nt(), j.ny(), j.nx(), perm);
      CHECK(std::abs(interaction_information(j) - interaction_information(jp)) < 1e-12);
      CHECK(std::abs(interaction_information(j) - interaction_information(j.swapped_xy())) < 1e-12);
    }
  }
}

TEST_CASE("random joints: chain rule, MI sign and symmetry, specific information average") {
  std::mt19937_64 rng(20261019);
  for (int k = 0; k < 1000; ++k) {
    const auto j = testing::random_joint(rng);
    const double i_txy = mutual_information(j.pair_with_target());
    const double i_ty = mutual_information(j.marginal_yt());
    CHECK(std::abs(i_txy - (i_ty + conditional_mi(j))) < 1e-12);

    const auto xt = j.marginal_xt();
    const double i_tx = mutual_information(xt);
    CHECK(i_tx >= 0.0);
    CHECK(std::abs(i_tx - mutual_information(xt.transposed())) < 1e-12);

    const auto pt = j.marginal_t();
    double avg = 0.0;
    for (std::size_t t = 0; t < pt.size(); ++t) avg += pt[t] * specific_information(xt, t);
    CHECK(std::abs(avg - i_tx) < 1e-12);
  }
}

TEST_SUITE("joint text format") {
  TEST_CASE("two-bit copy fixture") {
    const auto j = parse_joint3("alphabet x y t\n0 0 00 0.25\n0 1 01 0.25\n1 0 10 0.25\n1 1 11 0.25\n");
    CHECK(j.nx() == 2);
    CHECK(j.nt() == 4);
    CHECK(j.at(1, 0, j.marginal_t().index_of("10")) == doctest::Approx(0.25));
  }

  TEST_CASE("comments and blank lines") {
    const auto j = parse_joint3("# header follows\n\nalphabet x y t\na b c 1 # the only cell\n");
    CHECK(j.table().size() == 1);
  }

  TEST_CASE("errors carry line numbers") {
    auto message = [](const char* text) {
      try {
        (void)parse_joint3(text);
      } catch (const Error& e) {
        return std::string(e.what());
      }
      return std::string();
    };
    CHECK(message("x y t\n").find("line 1") != std::string::npos);
    CHECK(message("alphabet x y t\n0 0 0 0.5\n0 1 oops\n").find("line 3") != std::string::npos);
    CHECK(message("alphabet x y t\n0 0 0 0.5\n0 0 0 0.5\n").find("duplicate") != std::string::npos);
    CHECK(message("alphabet x y t\n0 0 0 0.5\n1 1 1 0.4\n").find("lines 2-3") != std::string::npos);
  }

  TEST_CASE("sum 0.9 is a validity error") {
    try {
      (void)parse_joint3("alphabet x y t\n0 0 0 0.5\n1 1 1 0.4\n");
      FAIL("expected a validity error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Validity);
    }
  }
}
