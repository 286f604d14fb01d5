#include "rotor/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace rotor {
namespace {

// Basis index layout: i = 2(k-1) is cos(k theta), i = 2(k-1)+1 is
// sin(k theta), k = 1..M.
int mode_of(int i) { return i / 2 + 1; }
bool is_cos(int i) { return i % 2 == 0; }

double basis_value(int i, double theta) {
  const double k = static_cast<double>(mode_of(i));
  return is_cos(i) ? std::cos(k * theta) : std::sin(k * theta);
}

double basis_deriv(int i, double theta) {
  const double k = static_cast<double>(mode_of(i));
  return is_cos(i) ? -k * std::sin(k * theta) : k * std::cos(k * theta);
}

double basis_primitive(int i, double theta) {
  const double k = static_cast<double>(mode_of(i));
  return is_cos(i) ? std::sin(k * theta) / k : -std::cos(k * theta) / k;
}

// J * b for a basis function: zero except at mode 1, where
// J*cos = -pi K sin theta and J*sin = pi K cos theta.
double basis_convolution(int i, double coupling, double theta) {
  if (mode_of(i) != 1) return 0.0;
  return is_cos(i) ? -M_PI * coupling * std::sin(theta)
                   : M_PI * coupling * std::cos(theta);
}

Eigen::VectorXd center_against(const Eigen::VectorXd& values,
                               const Eigen::VectorXd& weight) {
  const double c = weight.dot(values) / weight.sum();
  return values.array() - c;
}

struct ParityBlockResult {
  std::vector<double> eigenvalues;
  Eigen::MatrixXd coefficients;  // rows over block indices
};

ParityBlockResult solve_block(const Eigen::MatrixXd& op,
                              const Eigen::MatrixXd& gram,
                              const std::vector<int>& indices) {
  const int m = static_cast<int>(indices.size());
  Eigen::MatrixXd a(m, m);
  Eigen::MatrixXd b(m, m);
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < m; ++c) {
      a(r, c) = -0.5 * (op(indices[static_cast<std::size_t>(r)],
                           indices[static_cast<std::size_t>(c)]) +
                        op(indices[static_cast<std::size_t>(c)],
                           indices[static_cast<std::size_t>(r)]));
      b(r, c) = gram(indices[static_cast<std::size_t>(r)],
                     indices[static_cast<std::size_t>(c)]);
    }
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, b);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error(
        "eigensolve: generalized eigensolver failed on a parity block "
        "(Gram conditioning)");
  }
  ParityBlockResult out;
  out.eigenvalues.assign(solver.eigenvalues().data(),
                         solver.eigenvalues().data() + m);
  out.coefficients = solver.eigenvectors();
  return out;
}

}  // namespace

OperatorAssembly assemble(double coupling, int truncation, double center) {
  if (!(coupling > 1.0)) {
    throw std::invalid_argument("assemble: coupling must exceed 1");
  }
  if (truncation < 16) {
    throw std::invalid_argument("assemble: truncation must be >= 16");
  }
  if (!std::isfinite(center)) {
    throw std::invalid_argument("assemble: center must be finite");
  }
  const int m2 = 2 * truncation;
  const double degree = solve_sync_degree(coupling);
  const auto q = StationaryProfile::with_degree(coupling, degree, center);
  const CircleGrid grid(8 * truncation);
  const int n = grid.size();
  const double drift_amp = 2.0 * coupling * degree;  // 2 K r, since J*q = -K r sin

  Eigen::VectorXd w(n);
  Eigen::VectorXd qv(n);
  for (int i = 0; i < n; ++i) {
    w(i) = q.inv_density(grid.node(i));
    qv(i) = q.density(grid.node(i));
  }

  // Centered primitives of the basis functions, and primitives of
  // L_q b_j: primitive(L_q u) = u'/2 + K r sin(theta - center) u - q (J*u).
  Eigen::MatrixXd prim(n, m2);
  Eigen::MatrixXd op_prim(n, m2);
  for (int j = 0; j < m2; ++j) {
    Eigen::VectorXd col(n);
    Eigen::VectorXd pcol(n);
    for (int i = 0; i < n; ++i) {
      const double theta = grid.node(i);
      col(i) = basis_primitive(j, theta);
      pcol(i) =
          0.5 * basis_deriv(j, theta) +
          0.5 * drift_amp * std::sin(theta - center) * basis_value(j, theta) -
          qv(i) * basis_convolution(j, coupling, theta);
    }
    prim.col(j) = center_against(col, w);
    op_prim.col(j) = pcol;
  }

  const double h = grid.spacing();
  OperatorAssembly out{coupling,          degree,          center,
                       truncation,        grid,
                       Eigen::MatrixXd(), Eigen::MatrixXd()};
  out.gram = h * prim.transpose() * w.asDiagonal() * prim;
  out.op = h * prim.transpose() * w.asDiagonal() * op_prim;

  const Eigen::LLT<Eigen::MatrixXd> llt(out.gram);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error(
        "assemble: Gram matrix is not positive definite at resolution " +
        std::to_string(n) + "; increase the grid");
  }
  return out;
}

SpectralDecomposition eigensolve(const OperatorAssembly& assembly) {
  const int m2 = 2 * assembly.truncation;
  SpectralDecomposition dec{assembly.coupling,
                            assembly.degree,
                            assembly.center,
                            assembly.truncation,
                            assembly.grid,
                            {},
                            Eigen::MatrixXd::Zero(m2, m2),
                            {},
                            {}};
  dec.eigenvalues.reserve(static_cast<std::size_t>(m2));
  dec.parity.reserve(static_cast<std::size_t>(m2));

  if (assembly.center == 0.0) {
    std::vector<int> cos_idx;
    std::vector<int> sin_idx;
    for (int i = 0; i < m2; ++i) {
      (is_cos(i) ? cos_idx : sin_idx).push_back(i);
    }
    // In the centered frame the parity blocks decouple exactly
    // (odd-even products integrate to zero), so solving them separately
    // loses nothing and keeps near-degenerate high pairs from mixing
    // across parity.
    const auto even = solve_block(assembly.op, assembly.gram, cos_idx);
    const auto odd = solve_block(assembly.op, assembly.gram, sin_idx);

    struct Entry {
      double lambda;
      int parity;
      int block_col;
    };
    std::vector<Entry> entries;
    entries.reserve(static_cast<std::size_t>(m2));
    for (int c = 0; c < assembly.truncation; ++c) {
      entries.push_back({even.eigenvalues[static_cast<std::size_t>(c)], +1, c});
      entries.push_back({odd.eigenvalues[static_cast<std::size_t>(c)], -1, c});
    }
    std::stable_sort(entries.begin(), entries.end(),
                     [](const Entry& a, const Entry& b) {
                       return a.lambda < b.lambda;
                     });

    for (int j = 0; j < m2; ++j) {
      const Entry& entry = entries[static_cast<std::size_t>(j)];
      dec.eigenvalues.push_back(entry.lambda);
      dec.parity.push_back(entry.parity);
      const auto& block = entry.parity > 0 ? even : odd;
      const auto& indices = entry.parity > 0 ? cos_idx : sin_idx;
      Eigen::VectorXd full = Eigen::VectorXd::Zero(m2);
      for (int r = 0; r < assembly.truncation; ++r) {
        full(indices[static_cast<std::size_t>(r)]) =
            block.coefficients(r, entry.block_col);
      }
      // Sign convention: e_j(0+) >= 0 for even functions, e_j'(0) >= 0
      // for odd ones.
      double orient = 0.0;
      for (int i = 0; i < m2; ++i) {
        if (entry.parity > 0 && is_cos(i)) orient += full(i);
        if (entry.parity < 0 && !is_cos(i)) {
          orient += static_cast<double>(mode_of(i)) * full(i);
        }
      }
      if (orient < 0.0) full = -full;
      dec.coefficients.col(j) = full;
    }
  } else {
    // Off-center profiles mix the global cosine and sine modes, so the
    // full pencil is solved in one piece. Parity labels stay 0; within
    // a near-degenerate pair the individual eigenvectors are only
    // determined up to a rotation of the pair's span.
    std::vector<int> all(static_cast<std::size_t>(m2));
    std::iota(all.begin(), all.end(), 0);
    const auto full_block = solve_block(assembly.op, assembly.gram, all);
    for (int j = 0; j < m2; ++j) {
      dec.eigenvalues.push_back(
          full_block.eigenvalues[static_cast<std::size_t>(j)]);
      dec.parity.push_back(0);
      Eigen::VectorXd full = full_block.coefficients.col(j);
      // Sign convention: largest-magnitude coefficient positive.
      Eigen::Index arg_max = 0;
      full.cwiseAbs().maxCoeff(&arg_max);
      if (full(arg_max) < 0.0) full = -full;
      dec.coefficients.col(j) = full;
    }
  }

  const int n = dec.grid.size();
  Eigen::MatrixXd basis_at_nodes(n, m2);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m2; ++j) {
      basis_at_nodes(i, j) = basis_value(j, dec.grid.node(i));
    }
  }
  const Eigen::MatrixXd values = basis_at_nodes * dec.coefficients;
  dec.eigenfunctions.resize(static_cast<std::size_t>(m2));
  for (int j = 0; j < m2; ++j) {
    dec.eigenfunctions[static_cast<std::size_t>(j)]
        .assign(values.col(j).data(), values.col(j).data() + n);
  }
  return dec;
}

namespace {

// Primitive of e_j at the nodes, from the analytic primitives of the
// basis functions.
Eigen::VectorXd eigen_primitive(const SpectralDecomposition& dec, int j) {
  const int n = dec.grid.size();
  const int m2 = 2 * dec.truncation;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  for (int b = 0; b < m2; ++b) {
    const double coeff = dec.coefficients(b, j);
    if (coeff == 0.0) continue;
    for (int i = 0; i < n; ++i) {
      out(i) += coeff * basis_primitive(b, dec.grid.node(i));
    }
  }
  return out;
}

Eigen::VectorXd profile_weights(const SpectralDecomposition& dec) {
  const auto q =
      StationaryProfile::with_degree(dec.coupling, dec.degree, dec.center);
  Eigen::VectorXd w(dec.grid.size());
  for (int i = 0; i < dec.grid.size(); ++i) {
    w(i) = q.inv_density(dec.grid.node(i));
  }
  return w;
}

}  // namespace

std::vector<std::vector<double>> adjoint_eigenfunctions(
    const SpectralDecomposition& dec) {
  const int n = dec.grid.size();
  const int m2 = 2 * dec.truncation;
  const Eigen::VectorXd w = profile_weights(dec);

  std::vector<std::vector<double>> out(static_cast<std::size_t>(m2));
  for (int j = 0; j < m2; ++j) {
    const Eigen::VectorXd centered =
        center_against(eigen_primitive(dec, j), w);
    // f' = -E/q with E the 1/q-centered primitive; the centering makes
    // f' integrate to zero, so a periodic f exists. Its spectral
    // primitive already has zero nodal mean, which is the int f = 0
    // normalization.
    std::vector<double> fprime(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      fprime[static_cast<std::size_t>(i)] = -centered(i) * w(i);
    }
    out[static_cast<std::size_t>(j)] = periodic_primitive(dec.grid, fprime);
  }
  return out;
}

AsymptoticsReport asymptotics_report(const SpectralDecomposition& dec,
                                     const std::vector<int>& p_range) {
  if (p_range.empty()) {
    throw std::invalid_argument("asymptotics_report: empty p range");
  }
  const int m = dec.truncation;
  const int max_p = *std::max_element(p_range.begin(), p_range.end());
  const int min_p = *std::min_element(p_range.begin(), p_range.end());
  if (min_p < 1 || 2 * max_p > m) {
    throw std::invalid_argument(
        "asymptotics_report: p range must lie within [1, M/2]");
  }

  const double kr = dec.coupling * dec.degree;
  const auto predicted = [kr](int p) {
    return 0.5 * static_cast<double>(p) * static_cast<double>(p) -
           kr * kr / 8.0;
  };

  // Align the index offset by total eigenvalue agreement over the
  // requested range.
  const int m2 = 2 * m;
  int best_offset = 0;
  double best_score = std::numeric_limits<double>::infinity();
  for (int offset = -2; offset <= 2; ++offset) {
    double score = 0.0;
    bool ok = true;
    for (int p : p_range) {
      const int lo = offset + 2 * p;
      if (lo < 0 || lo + 1 >= m2) {
        ok = false;
        break;
      }
      score += std::abs(dec.eigenvalues[static_cast<std::size_t>(lo)] -
                        predicted(p)) +
               std::abs(dec.eigenvalues[static_cast<std::size_t>(lo + 1)] -
                        predicted(p));
    }
    if (ok && score < best_score) {
      best_score = score;
      best_offset = offset;
    }
  }

  const auto q =
      StationaryProfile::with_degree(dec.coupling, dec.degree, dec.center);
  const Eigen::VectorXd w = profile_weights(dec);
  std::vector<double> weights(w.data(), w.data() + w.size());
  const int n = dec.grid.size();

  AsymptoticsReport report;
  report.index_offset = best_offset;
  report.truncation_warning = 4 * max_p > m;
  for (int p : p_range) {
    const int lo = best_offset + 2 * p;
    const double l0 = dec.eigenvalues[static_cast<std::size_t>(lo)];
    const double l1 = dec.eigenvalues[static_cast<std::size_t>(lo + 1)];
    const double pred = predicted(p);

    // Predicted pair span: mean-subtracted sqrt(q) v_{1,2}.
    std::vector<std::vector<double>> span(2);
    for (int a = 0; a < 2; ++a) {
      span[static_cast<std::size_t>(a)].resize(static_cast<std::size_t>(n));
    }
    for (int i = 0; i < n; ++i) {
      const double theta = dec.grid.node(i);
      const double vt = theta - dec.center;
      const double corr =
          0.5 * kr * std::sin(vt) + kr * kr / 8.0 * std::sin(2.0 * vt);
      const double dp = static_cast<double>(p);
      const double v1 = std::cos(dp * vt) - std::sin(dp * vt) / dp * corr;
      const double v2 = std::sin(dp * vt) + std::cos(dp * vt) / dp * corr;
      const double root_q = std::sqrt(q.density(theta));
      span[0][static_cast<std::size_t>(i)] = root_q * v1;
      span[1][static_cast<std::size_t>(i)] = root_q * v2;
    }
    std::vector<HMinusOneElement> span_elems;
    for (auto& values : span) {
      const double mean =
          std::accumulate(values.begin(), values.end(), 0.0) /
          static_cast<double>(n);
      for (double& v : values) v -= mean;
      span_elems.push_back(
          HMinusOneElement::from_density_values(dec.grid, values));
    }
    Eigen::Matrix2d span_gram;
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        span_gram(a, b) = h1w_inner_product(
            span_elems[static_cast<std::size_t>(a)],
            span_elems[static_cast<std::size_t>(b)], weights);
      }
    }

    double defect = 0.0;
    for (int member = 0; member < 2; ++member) {
      const Eigen::VectorXd prim = eigen_primitive(dec, lo + member);
      const HMinusOneElement e_elem(
          dec.grid, std::vector<double>(prim.data(), prim.data() + n));
      Eigen::Vector2d cross;
      for (int a = 0; a < 2; ++a) {
        cross(a) = h1w_inner_product(span_elems[static_cast<std::size_t>(a)],
                                     e_elem, weights);
      }
      const Eigen::Vector2d alpha = span_gram.ldlt().solve(cross);
      // ||e||_G = 1 by construction, so the squared residual of the
      // G-least-squares fit is 1 - c . alpha.
      defect = std::max(defect,
                        std::sqrt(std::max(0.0, 1.0 - cross.dot(alpha))));
    }

    report.rows.push_back({p, l0, l1, pred,
                           std::max(std::abs(l0 - pred), std::abs(l1 - pred)),
                           defect});
  }
  return report;
}

HMinusOneElement semigroup_apply(const SpectralDecomposition& dec, double s,
                                 const HMinusOneElement& u) {
  if (!(s >= 0.0)) {
    throw std::invalid_argument("semigroup_apply: time must be >= 0");
  }
  if (u.grid().size() != dec.grid.size()) {
    throw std::invalid_argument(
        "semigroup_apply: element grid does not match the decomposition");
  }
  const int n = dec.grid.size();
  const int m2 = 2 * dec.truncation;
  const Eigen::VectorXd w = profile_weights(dec);
  const std::vector<double> weights(w.data(), w.data() + w.size());

  std::vector<double> out(static_cast<std::size_t>(n), 0.0);
  for (int l = 0; l < m2; ++l) {
    const Eigen::VectorXd prim = eigen_primitive(dec, l);
    const HMinusOneElement e_elem(
        dec.grid, std::vector<double>(prim.data(), prim.data() + n));
    const double a_l = h1w_inner_product(u, e_elem, weights);
    const double decay =
        std::exp(-s * dec.eigenvalues[static_cast<std::size_t>(l)]);
    for (int i = 0; i < n; ++i) {
      out[static_cast<std::size_t>(i)] += decay * a_l * prim(i);
    }
  }
  return HMinusOneElement(dec.grid, std::move(out));
}

}  // namespace rotor
