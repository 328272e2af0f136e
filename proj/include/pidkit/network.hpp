#pragma once

// Gaussian interaction networks: node activities X ~ N(0, Sigma) with
// Sigma = I + rho * (signed adjacency), and a response built from kernel
// interactions on designated edges plus optional linear terms.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "pidkit/nfbi.hpp"

namespace pidkit {

struct SignedEdge {
  std::size_t i = 0;
  std::size_t j = 0;
  int sign = 1;  ///< +1 or -1
};

/// An interaction g(X_x, X_y); x_node is the kernel's switch argument.
struct Interaction {
  std::size_t x_node = 0;
  std::size_t y_node = 0;
};

struct MixedTerm {
  std::size_t node = 0;
  double beta = 0.0;
};

/// Eigenvalues at or below this count as a failed positive-definiteness check.
inline constexpr double kPdEigenFloor = 1e-12;

/// Largest rho keeping I + rho * S positive definite, -1 / lambda_min(S).
/// Infinite for a graph without edges.
double max_admissible_rho(std::size_t n_nodes, std::span<const SignedEdge> edges);

/// Throws ErrorCode::NotPositiveDefinite (with the admissible bound in the
/// message) or ErrorCode::InvalidArgument for malformed topology.
Eigen::MatrixXd build_covariance(std::size_t n_nodes, std::span<const SignedEdge> edges,
                                 double rho);

class InteractionNetwork {
 public:
  InteractionNetwork(std::size_t n_nodes, std::vector<SignedEdge> edges, double rho,
                     std::vector<Interaction> interactions, NfbiKernel kernel,
                     std::vector<MixedTerm> mixed_terms = {});

  std::size_t n_nodes() const { return n_nodes_; }
  const std::vector<SignedEdge>& edges() const { return edges_; }
  double rho() const { return rho_; }
  const std::vector<Interaction>& interactions() const { return interactions_; }
  const NfbiKernel& kernel() const { return kernel_; }
  const std::vector<MixedTerm>& mixed_terms() const { return mixed_terms_; }
  const Eigen::MatrixXd& covariance() const { return covariance_; }
  /// Lower Cholesky factor of the covariance.
  const Eigen::MatrixXd& cholesky_factor() const { return chol_; }

  /// Response for one row of node activities.
  double response(std::span<const double> row) const;
  /// True when the unordered pair {i, j} carries an interaction.
  bool is_interaction_pair(std::size_t i, std::size_t j) const;
  /// True when {i, j} is an edge of the graph.
  bool has_edge(std::size_t i, std::size_t j) const;
  /// Number of edges incident to the node.
  std::size_t degree(std::size_t node) const;

 private:
  std::size_t n_nodes_;
  std::vector<SignedEdge> edges_;
  double rho_;
  std::vector<Interaction> interactions_;
  NfbiKernel kernel_;
  std::vector<MixedTerm> mixed_terms_;
  Eigen::MatrixXd covariance_;
  Eigen::MatrixXd chol_;
  std::vector<std::size_t> degree_;
};

struct SampleBatch {
  std::size_t n_samples = 0;
  std::size_t n_nodes = 0;
  std::vector<double> predictors;  ///< row-major n_samples x n_nodes
  std::vector<double> response;
  std::uint64_t seed = 0;

  std::span<const double> row(std::size_t k) const {
    return {predictors.data() + k * n_nodes, n_nodes};
  }
  double at(std::size_t k, std::size_t node) const { return predictors[k * n_nodes + node]; }
};

/// Rows are i.i.d. N(0, Sigma). Output is a function of (network, n, seed)
/// only.
SampleBatch sample(const InteractionNetwork& network, std::size_t n, std::uint64_t seed,
                   unsigned workers = 1);

inline constexpr std::size_t kStandardNetworkNodes = 50;
inline constexpr double kDefaultNetworkRho = 0.3;

/// Fifty nodes; five 4-stars with hubs 0, 5, 10, 15, 20 and spokes at the
/// next four indices; nodes 25..49 isolated. The spokes of hub 0 interact
/// with it through the sigmoidal kernel.
InteractionNetwork network_a(double alpha, double rho = kDefaultNetworkRho);

inline constexpr std::size_t kNetworkBHub1 = 0;
inline constexpr std::size_t kNetworkBHub2 = 11;

/// Fifty nodes; 10-stars at hub 0 (spokes 1..10) and hub 11 (spokes
/// 12..21); the rest isolated. Spokes 1..k interact with hub 0 and hub 11
/// enters the response linearly with coefficient beta.
InteractionNetwork network_b(double alpha, double beta, std::size_t k,
                             double rho = kDefaultNetworkRho);

struct TaylorCoefficients {
  double dy_f = 0.0;
  double dxy_f = 0.0;
  double norm = 0.0;  ///< |dy_f| + 4 |dxy_f|
  double normalized_dy = 0.0;
  double normalized_dxy = 0.0;
};

/// Second-order expansion coefficients of the summed sigmoidal star response.
TaylorCoefficients taylor_coefficients(double alpha);

/// Line-oriented network description:
///   nodes N
///   rho R
///   kernel SPEC            (linear:A,B | sigmoidal:ALPHA | symmetric)
///   edge I J [+|-]
///   interaction X Y
///   mixed NODE BETA
/// Blank lines and '#' comments are ignored. Errors carry line numbers.
InteractionNetwork parse_network_spec(std::string_view text);
InteractionNetwork load_network_spec(const std::string& path);

}  // namespace pidkit
