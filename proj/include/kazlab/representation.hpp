#pragma once

// Finite-dimensional unitary representations, their decomposition into
// isotypic blocks, the projection of HS(H) onto the commutant and the mean
// formulas for |<pi(g)x, y>|^2.
//
// A BlockDecomposition lists, for every class j, the copies H_{u,j} of one
// irreducible as d x d_j isometries V_u. The commutant projection is
//
//   P A = sum_j (1/d_j) sum_{u,v} tr(V_u^* A V_v) V_u V_v^*.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "kazlab/errors.hpp"

namespace kazlab {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double unitarity_tolerance = 1e-10;
inline constexpr double default_cluster_tolerance = 1e-8;
inline constexpr double eigen_residual_tolerance = 1e-8;
inline constexpr std::size_t default_dimension_cap = 4096;

// integers: one generator; lattice: d commuting generators (Z^d);
// compact: images of generators of a compact group, decomposed by the caller.
enum class GroupTag { integers, lattice, compact };

inline std::string to_string(GroupTag tag) {
  switch (tag) {
    case GroupTag::integers: return "Z";
    case GroupTag::lattice: return "Z^d";
    case GroupTag::compact: return "compact";
  }
  return "unknown";
}

class UnitaryRep {
 public:
  UnitaryRep() = default;

  UnitaryRep(GroupTag tag, std::vector<Matrix> generators) : tag_(tag), generators_(std::move(generators)) {
    require(!generators_.empty(), ErrorCode::invalid_argument, "representation needs a generator");
    if (tag_ == GroupTag::integers) {
      require(generators_.size() == 1, ErrorCode::invalid_argument, "a representation of Z has one generator");
    }
    const auto d = generators_.front().rows();
    require(d >= 1, ErrorCode::invalid_argument, "representation dimension must be positive");
    for (std::size_t i = 0; i < generators_.size(); ++i) {
      const auto& u = generators_[i];
      require(u.rows() == d && u.cols() == d, ErrorCode::invalid_argument, "generators must be square of equal size");
      const double err = (u.adjoint() * u - Matrix::Identity(d, d)).norm();
      if (err >= unitarity_tolerance) {
        fail(ErrorCode::invalid_argument,
             "generator " + std::to_string(i) + " is not unitary: |U*U - I| = " + std::to_string(err));
      }
    }
    if (tag_ != GroupTag::compact) {
      for (std::size_t i = 0; i < generators_.size(); ++i) {
        for (std::size_t k = i + 1; k < generators_.size(); ++k) {
          const double err = (generators_[i] * generators_[k] - generators_[k] * generators_[i]).norm();
          require(err < unitarity_tolerance, ErrorCode::invalid_argument,
                  "generators " + std::to_string(i) + " and " + std::to_string(k) + " do not commute");
        }
      }
    }
  }

  static UnitaryRep cyclic(Matrix u) { return UnitaryRep(GroupTag::integers, {std::move(u)}); }

  static UnitaryRep lattice(std::vector<Matrix> generators) {
    return UnitaryRep(GroupTag::lattice, std::move(generators));
  }

  // diag(e^{i phi_1}, ..., e^{i phi_d}) for a representation of Z.
  static UnitaryRep diagonal(const std::vector<double>& phases) {
    Matrix u = Matrix::Zero(static_cast<Eigen::Index>(phases.size()), static_cast<Eigen::Index>(phases.size()));
    for (std::size_t i = 0; i < phases.size(); ++i) {
      u(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = std::polar(1.0, phases[i]);
    }
    return cyclic(std::move(u));
  }

  static UnitaryRep trivial(std::size_t dimension, std::size_t generators = 1) {
    const auto d = static_cast<Eigen::Index>(dimension);
    std::vector<Matrix> gens(generators, Matrix::Identity(d, d));
    return UnitaryRep(generators == 1 ? GroupTag::integers : GroupTag::lattice, std::move(gens));
  }

  GroupTag tag() const { return tag_; }
  bool abelian() const { return tag_ != GroupTag::compact; }
  Eigen::Index dimension() const { return generators_.front().rows(); }
  const std::vector<Matrix>& generators() const { return generators_; }
  const Matrix& generator(std::size_t i) const { return generators_.at(i); }

  // pi(g) for g = (e_1, ..., e_r) meaning U_1^{e_1} ... U_r^{e_r}.
  Matrix act(const std::vector<std::int64_t>& exponents) const {
    require(exponents.size() == generators_.size(), ErrorCode::invalid_argument,
            "group element has " + std::to_string(exponents.size()) + " coordinates, representation has " +
                std::to_string(generators_.size()) + " generators");
    Matrix result = Matrix::Identity(dimension(), dimension());
    for (std::size_t i = 0; i < exponents.size(); ++i) result = result * power(generators_[i], exponents[i]);
    return result;
  }

  static Matrix power(const Matrix& u, std::int64_t e) {
    Matrix base = e < 0 ? Matrix(u.adjoint()) : u;
    auto n = static_cast<std::uint64_t>(e < 0 ? -(e + 1) + std::uint64_t{1} : e);
    Matrix result = Matrix::Identity(u.rows(), u.cols());
    while (n) {
      if (n & 1u) result = result * base;
      base = base * base;
      n >>= 1;
    }
    return result;
  }

 private:
  GroupTag tag_ = GroupTag::integers;
  std::vector<Matrix> generators_;
};

struct IsotypicClass {
  std::vector<std::complex<double>> eigenvalues;  // joint eigenvalues (abelian case)
  Eigen::Index irreducible_dimension = 1;         // d_j
  std::vector<Matrix> copies;                     // d x d_j isometries

  std::size_t multiplicity() const { return copies.size(); }
};

struct BlockDecomposition {
  Eigen::Index dimension = 0;
  std::vector<IsotypicClass> classes;

  Eigen::Index covered_dimension() const {
    Eigen::Index total = 0;
    for (const auto& c : classes) total += static_cast<Eigen::Index>(c.multiplicity()) * c.irreducible_dimension;
    return total;
  }

  // All copies side by side; unitary for a valid decomposition.
  Matrix basis() const {
    Matrix w(dimension, covered_dimension());
    Eigen::Index col = 0;
    for (const auto& c : classes) {
      for (const auto& v : c.copies) {
        w.middleCols(col, v.cols()) = v;
        col += v.cols();
      }
    }
    return w;
  }
};

// Orthogonality, exhaustiveness, invariance of every copy and equality of
// the irreducible carried by copies of one class.
inline void check_decomposition(const UnitaryRep& rep, const BlockDecomposition& dec, double tol = 1e-8) {
  require(dec.dimension == rep.dimension(), ErrorCode::domain_mismatch,
          "decomposition dimension " + std::to_string(dec.dimension) + " differs from representation dimension " +
              std::to_string(rep.dimension()));
  require(dec.covered_dimension() == dec.dimension, ErrorCode::domain_mismatch,
          "decomposition blocks do not exhaust the space");
  for (const auto& c : dec.classes) {
    require(!c.copies.empty(), ErrorCode::domain_mismatch, "class without copies");
    for (const auto& v : c.copies) {
      require(v.rows() == dec.dimension && v.cols() == c.irreducible_dimension, ErrorCode::domain_mismatch,
              "copy has the wrong shape for its class");
    }
  }
  const Matrix w = dec.basis();
  const double orth = (w.adjoint() * w - Matrix::Identity(w.cols(), w.cols())).norm();
  require(orth < tol, ErrorCode::domain_mismatch, "decomposition blocks are not orthonormal");
  for (const auto& u : rep.generators()) {
    for (const auto& c : dec.classes) {
      const Matrix first = c.copies.front().adjoint() * u * c.copies.front();
      for (const auto& v : c.copies) {
        const Matrix block = v.adjoint() * u * v;
        require((u * v - v * block).norm() < tol, ErrorCode::domain_mismatch,
                "a block of the decomposition is not invariant");
        require((block - first).norm() < tol, ErrorCode::domain_mismatch,
                "copies of one class carry different matrices");
      }
    }
  }
}

namespace detail {

struct Cluster {
  std::vector<Eigen::Index> members;
};

// Single-linkage clustering of points on the unit circle.
inline std::vector<Cluster> cluster_eigenvalues(const Eigen::VectorXcd& values, double cluster_tol, double noise_floor) {
  const auto n = values.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return std::arg(values[a]) < std::arg(values[b]); });

  std::vector<Cluster> clusters;
  for (auto idx : order) {
    if (!clusters.empty() && std::abs(values[idx] - values[clusters.back().members.back()]) < cluster_tol) {
      clusters.back().members.push_back(idx);
    } else {
      clusters.push_back({{idx}});
    }
  }
  // the sort is by argument, so the last cluster may wrap around to the first
  if (clusters.size() > 1 &&
      std::abs(values[clusters.back().members.back()] - values[clusters.front().members.front()]) < cluster_tol) {
    auto& front = clusters.front().members;
    front.insert(front.begin(), clusters.back().members.begin(), clusters.back().members.end());
    clusters.pop_back();
  }
  for (const auto& c : clusters) {
    for (auto a : c.members) {
      for (auto b : c.members) {
        const double gap = std::abs(values[a] - values[b]);
        if (gap > noise_floor) {
          std::ostringstream msg;
          msg << "eigenvalues " << values[a] << " and " << values[b] << " are " << gap
              << " apart: closer than cluster_tol = " << cluster_tol
              << " but distinct beyond rounding; choose a different tolerance";
          fail(ErrorCode::ambiguity, msg.str());
        }
      }
    }
  }
  return clusters;
}

inline bool is_diagonal(const Matrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (i != j && m(i, j) != std::complex<double>(0.0)) return false;
    }
  }
  return true;
}

}  // namespace detail

// Joint eigendecomposition of an abelian representation: each generator is
// diagonalized in turn inside the eigenspaces of the previous ones.
inline BlockDecomposition decompose(const UnitaryRep& rep, double cluster_tol = default_cluster_tolerance) {
  require(rep.abelian(), ErrorCode::invalid_argument,
          "automatic decomposition needs an abelian representation; supply a BlockDecomposition instead");
  require(cluster_tol > 0.0, ErrorCode::invalid_argument, "cluster_tol must be positive");
  const auto d = rep.dimension();
  const double noise_floor = 100.0 * static_cast<double>(d) * std::numeric_limits<double>::epsilon();

  struct Branch {
    Matrix basis;
    std::vector<std::complex<double>> labels;
  };
  std::vector<Branch> branches{{Matrix::Identity(d, d), {}}};
  for (const auto& u : rep.generators()) {
    std::vector<Branch> next;
    for (const auto& br : branches) {
      const Matrix restricted = br.basis.adjoint() * u * br.basis;
      Matrix vectors;
      Eigen::VectorXcd values;
      if (detail::is_diagonal(restricted)) {
        vectors = Matrix::Identity(restricted.rows(), restricted.cols());
        values = restricted.diagonal();
      } else {
        Eigen::ComplexSchur<Matrix> schur(restricted);
        require(schur.info() == Eigen::Success, ErrorCode::internal_consistency, "Schur decomposition failed");
        vectors = schur.matrixU();
        values = schur.matrixT().diagonal();
      }
      for (const auto& cl : detail::cluster_eigenvalues(values, cluster_tol, noise_floor)) {
        Branch b;
        b.basis.resize(d, static_cast<Eigen::Index>(cl.members.size()));
        for (std::size_t i = 0; i < cl.members.size(); ++i) {
          b.basis.col(static_cast<Eigen::Index>(i)) = br.basis * vectors.col(cl.members[i]);
        }
        b.labels = br.labels;
        const Matrix block = b.basis.adjoint() * u * b.basis;
        b.labels.push_back(block.trace() / static_cast<double>(block.rows()));
        next.push_back(std::move(b));
      }
    }
    branches = std::move(next);
  }

  std::sort(branches.begin(), branches.end(), [](const Branch& a, const Branch& b) {
    for (std::size_t i = 0; i < a.labels.size(); ++i) {
      const double x = std::arg(a.labels[i]);
      const double y = std::arg(b.labels[i]);
      if (x != y) return x < y;
    }
    return false;
  });

  BlockDecomposition dec;
  dec.dimension = d;
  for (auto& br : branches) {
    for (std::size_t g = 0; g < rep.generators().size(); ++g) {
      const double residual = (rep.generator(g) * br.basis - br.labels[g] * br.basis).colwise().norm().maxCoeff();
      if (residual >= eigen_residual_tolerance) {
        fail(ErrorCode::internal_consistency,
             "eigenvector residual " + std::to_string(residual) + " exceeds " + std::to_string(eigen_residual_tolerance));
      }
    }
    IsotypicClass c;
    c.eigenvalues = br.labels;
    c.irreducible_dimension = 1;
    for (Eigen::Index i = 0; i < br.basis.cols(); ++i) c.copies.push_back(br.basis.col(i));
    dec.classes.push_back(std::move(c));
  }
  return dec;
}

// ---- Hilbert-Schmidt operators -----------------------------------------------

inline std::complex<double> hs_inner(const Matrix& a, const Matrix& b) { return (b.adjoint() * a).trace(); }

inline double hs_norm(const Matrix& a) { return a.norm(); }

inline Matrix commutant_projection(const UnitaryRep& rep, const BlockDecomposition& dec, const Matrix& a) {
  check_decomposition(rep, dec);
  require(a.rows() == dec.dimension && a.cols() == dec.dimension, ErrorCode::domain_mismatch,
          "operator size differs from the representation dimension");
  Matrix out = Matrix::Zero(dec.dimension, dec.dimension);
  for (const auto& c : dec.classes) {
    const double inv_d = 1.0 / static_cast<double>(c.irreducible_dimension);
    for (const auto& vu : c.copies) {
      for (const auto& vv : c.copies) {
        const std::complex<double> tr = (vu.adjoint() * a * vv).trace();
        out.noalias() += inv_d * tr * (vu * vv.adjoint());
      }
    }
  }
  return out;
}

// ||P A||_HS from the block traces alone.
inline double projection_norm(const UnitaryRep& rep, const BlockDecomposition& dec, const Matrix& a) {
  check_decomposition(rep, dec);
  require(a.rows() == dec.dimension && a.cols() == dec.dimension, ErrorCode::domain_mismatch,
          "operator size differs from the representation dimension");
  double sq = 0.0;
  for (const auto& c : dec.classes) {
    double cls = 0.0;
    for (const auto& vu : c.copies) {
      for (const auto& vv : c.copies) cls += std::norm((vu.adjoint() * a * vv).trace());
    }
    sq += cls / static_cast<double>(c.irreducible_dimension);
  }
  return std::sqrt(sq);
}

// (1/(2N+1)) sum_{n=-N}^{N} U^n A U^{-n}.
inline Matrix cesaro_conjugation_mean(const UnitaryRep& rep, const Matrix& a, std::uint64_t count) {
  require(rep.tag() == GroupTag::integers, ErrorCode::invalid_argument, "Cesaro oracle is defined for Z");
  const Matrix& u = rep.generator(0);
  const Matrix ustar = u.adjoint();
  Matrix sum = a;
  Matrix forward = a;
  Matrix backward = a;
  for (std::uint64_t n = 1; n <= count; ++n) {
    forward = u * forward * ustar;
    backward = ustar * backward * u;
    sum += forward + backward;
  }
  return sum / static_cast<double>(2 * count + 1);
}

// ---- mean squares of matrix coefficients ------------------------------------

// Per class j, the d_j x d_j matrix (1/sqrt d_j) sum_i x_{i,j} y_{i,j}^*.
struct BVector {
  std::vector<Matrix> blocks;

  double squared_norm() const {
    double s = 0.0;
    for (const auto& b : blocks) s += b.squaredNorm();
    return s;
  }
};

inline BVector b_vector(const UnitaryRep& rep, const BlockDecomposition& dec, const Vector& x, const Vector& y) {
  check_decomposition(rep, dec);
  require(x.size() == dec.dimension && y.size() == dec.dimension, ErrorCode::domain_mismatch,
          "vector size differs from the representation dimension");
  BVector b;
  for (const auto& c : dec.classes) {
    Matrix m = Matrix::Zero(c.irreducible_dimension, c.irreducible_dimension);
    for (const auto& v : c.copies) m += (v.adjoint() * x) * (v.adjoint() * y).adjoint();
    b.blocks.push_back(m / std::sqrt(static_cast<double>(c.irreducible_dimension)));
  }
  return b;
}

// sum_j (1/d_j) sum_{u,v} <x_u, x_v> conj<y_u, y_v>, the second expression for ||b_{x,y}||^2.
inline double b_vector_gram_norm(const BlockDecomposition& dec, const Vector& x, const Vector& y) {
  double s = 0.0;
  for (const auto& c : dec.classes) {
    double cls = 0.0;
    for (const auto& vu : c.copies) {
      const Vector xu = vu.adjoint() * x;
      const Vector yu = vu.adjoint() * y;
      for (const auto& vv : c.copies) {
        const Vector xv = vv.adjoint() * x;
        const Vector yv = vv.adjoint() * y;
        cls += (xv.dot(xu) * std::conj(yv.dot(yu))).real();
      }
    }
    s += cls / static_cast<double>(c.irreducible_dimension);
  }
  return s;
}

inline double mean_square_coefficient(const UnitaryRep& rep, const BlockDecomposition& dec, const Vector& x,
                                      const Vector& y) {
  return b_vector(rep, dec, x, y).squared_norm();
}

// (1/(2N+1)) sum_{n=-N}^{N} |<U^n x, y>|^2.
inline double cesaro_mean_square(const UnitaryRep& rep, const Vector& x, const Vector& y, std::uint64_t count) {
  require(rep.tag() == GroupTag::integers, ErrorCode::invalid_argument, "Cesaro oracle is defined for Z");
  const Matrix& u = rep.generator(0);
  const Matrix ustar = u.adjoint();
  Vector forward = x;
  Vector backward = x;
  double sum = std::norm(y.dot(x));
  for (std::uint64_t n = 1; n <= count; ++n) {
    forward = u * forward;
    backward = ustar * backward;
    sum += std::norm(y.dot(forward)) + std::norm(y.dot(backward));
  }
  return sum / static_cast<double>(2 * count + 1);
}

// sum_j (1/d_j) ||x~_j||^2 ||y~_j||^2 with x~_j the component of x in class j.
inline double mean_square_upper_bound(const UnitaryRep& rep, const BlockDecomposition& dec, const Vector& x,
                                      const Vector& y) {
  check_decomposition(rep, dec);
  double s = 0.0;
  for (const auto& c : dec.classes) {
    double nx = 0.0;
    double ny = 0.0;
    for (const auto& v : c.copies) {
      nx += (v.adjoint() * x).squaredNorm();
      ny += (v.adjoint() * y).squaredNorm();
    }
    s += nx * ny / static_cast<double>(c.irreducible_dimension);
  }
  return s;
}

// x restricted to the listed classes.
inline Vector restrict_to_classes(const BlockDecomposition& dec, const Vector& x, const std::vector<std::size_t>& classes) {
  Vector out = Vector::Zero(x.size());
  for (auto j : classes) {
    require(j < dec.classes.size(), ErrorCode::invalid_argument, "class index out of range");
    for (const auto& v : dec.classes[j].copies) out += v * (v.adjoint() * x);
  }
  return out;
}

// ---- constructions on representations ---------------------------------------

inline UnitaryRep tensor(const UnitaryRep& a, const UnitaryRep& b, std::size_t dimension_cap = default_dimension_cap) {
  require(a.tag() == b.tag() && a.generators().size() == b.generators().size(), ErrorCode::domain_mismatch,
          "tensor product needs representations of the same group");
  const auto d = static_cast<std::size_t>(a.dimension()) * static_cast<std::size_t>(b.dimension());
  if (d > dimension_cap) {
    fail(ErrorCode::dimension_overflow,
         "tensor dimension " + std::to_string(d) + " exceeds cap " + std::to_string(dimension_cap));
  }
  std::vector<Matrix> gens;
  for (std::size_t i = 0; i < a.generators().size(); ++i) {
    const Matrix& x = a.generator(i);
    const Matrix& y = b.generator(i);
    Matrix k(x.rows() * y.rows(), x.cols() * y.cols());
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
      for (Eigen::Index c = 0; c < x.cols(); ++c) k.block(r * y.rows(), c * y.cols(), y.rows(), y.cols()) = x(r, c) * y;
    }
    gens.push_back(std::move(k));
  }
  return UnitaryRep(a.tag(), std::move(gens));
}

inline UnitaryRep conjugate(const UnitaryRep& rep) {
  std::vector<Matrix> gens;
  for (const auto& u : rep.generators()) gens.push_back(u.conjugate());
  return UnitaryRep(rep.tag(), std::move(gens));
}

// Dimension of the joint fixed space: the null space of the stacked U_i - I.
inline std::size_t invariant_dimension(const UnitaryRep& rep, double tol = default_cluster_tolerance) {
  const auto d = rep.dimension();
  const auto r = static_cast<Eigen::Index>(rep.generators().size());
  Matrix stacked(r * d, d);
  for (Eigen::Index i = 0; i < r; ++i) {
    stacked.middleRows(i * d, d) = rep.generator(static_cast<std::size_t>(i)) - Matrix::Identity(d, d);
  }
  Eigen::BDCSVD<Matrix> svd(stacked);
  const auto& s = svd.singularValues();
  std::size_t zero = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) zero += s[i] < tol;
  return zero;
}

// ---- random unitaries ---------------------------------------------------------

// Haar-distributed d x d unitary (QR of a complex Gaussian matrix with phase fix).
inline Matrix haar_unitary(Eigen::Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Matrix z(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) z(i, j) = {normal(rng), normal(rng)};
  }
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ();
  const Matrix rr = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < d; ++j) {
    const auto diag = rr(j, j);
    if (std::abs(diag) > 0.0) q.col(j) *= diag / std::abs(diag);
  }
  return q;
}

// ---- I/O -------------------------------------------------------------------------

// One matrix row per line: re,im,re,im,...
inline void write_matrix_csv(std::ostream& out, const Matrix& m) {
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << m(i, j).real() << ',' << m(i, j).imag();
    }
    out << '\n';
  }
}

inline Matrix read_matrix_csv(std::istream& in) {
  std::vector<std::vector<std::complex<double>>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> nums;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        nums.push_back(std::stod(tok));
      } catch (const std::logic_error&) {
        fail(ErrorCode::schema, "matrix CSV: cannot parse '" + tok + "'");
      }
    }
    require(nums.size() % 2 == 0, ErrorCode::schema, "matrix CSV rows need interleaved re,im pairs");
    std::vector<std::complex<double>> row;
    for (std::size_t i = 0; i < nums.size(); i += 2) row.emplace_back(nums[i], nums[i + 1]);
    rows.push_back(std::move(row));
  }
  require(!rows.empty(), ErrorCode::schema, "matrix CSV is empty");
  const auto n = rows.size();
  Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < n; ++i) {
    require(rows[i].size() == rows.front().size(), ErrorCode::schema, "matrix CSV rows differ in length");
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return m;
}

inline Matrix read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::io, "cannot open matrix file " + path);
  return read_matrix_csv(in);
}

inline nlohmann::ordered_json complex_json(std::complex<double> z) { return nlohmann::ordered_json::array({z.real(), z.imag()}); }

inline nlohmann::ordered_json to_json(const BlockDecomposition& dec) {
  nlohmann::ordered_json j;
  j["dimension"] = dec.dimension;
  auto& classes = j["classes"] = nlohmann::ordered_json::array();
  for (const auto& c : dec.classes) {
    nlohmann::ordered_json cj;
    auto& ev = cj["eigenvalues"] = nlohmann::ordered_json::array();
    for (auto z : c.eigenvalues) ev.push_back(complex_json(z));
    cj["multiplicity"] = c.multiplicity();
    cj["irreducible_dimension"] = c.irreducible_dimension;
    auto& basis = cj["basis"] = nlohmann::ordered_json::array();
    for (const auto& v : c.copies) {
      for (Eigen::Index col = 0; col < v.cols(); ++col) {
        auto column = nlohmann::ordered_json::array();
        for (Eigen::Index r = 0; r < v.rows(); ++r) column.push_back(complex_json(v(r, col)));
        basis.push_back(std::move(column));
      }
    }
    classes.push_back(std::move(cj));
  }
  return j;
}

}  // namespace kazlab
