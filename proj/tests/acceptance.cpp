// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Usage: kazlab_acceptance <path to kazlab cli> <scenario directory>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <unistd.h>

#include "oracles.hpp"

using namespace kazlab;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int id, const std::string& title, bool ok, const std::string& detail) {
  std::cout << (ok ? "PASS" : "FAIL") << " [" << id << "] " << title << ": " << detail << std::endl;
  if (!ok) ++failures;
}

template <class F>
void criterion(int id, const std::string& title, F&& body) {
  try {
    std::ostringstream detail;
    const bool ok = body(detail);
    report(id, title, ok, detail.str());
  } catch (const std::exception& e) {
    report(id, title, false, std::string("exception: ") + e.what());
  }
}

std::vector<oracle::TestMeasure> measure_suite() {
  std::mt19937_64 rng(1001);
  std::vector<oracle::TestMeasure> out;
  for (int i = 0; i < 20; ++i) out.push_back(oracle::random_test_measure(rng, std::size_t{1} << 15, i % 2 == 0));
  return out;
}

// Test unitaries with separated spectra, d <= 8.
struct Instance {
  oracle::KnownUnitary known;
  Eigen::Index d;
};

std::vector<Instance> unitary_suite(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Instance> out;
  while (out.size() < 50) {
    const std::size_t k = 1 + rng() % 5;
    std::vector<int> mult(k);
    int d = 0;
    for (auto& m : mult) {
      m = 1 + static_cast<int>(rng() % 3);
      d += m;
    }
    if (d > 8) continue;
    out.push_back({oracle::known_unitary(oracle::separated_phases(k, 0.3, rng), mult, rng), d});
  }
  return out;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) out += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return out + "'";
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: kazlab_acceptance <kazlab cli> <scenario dir>\n";
    return 2;
  }
  const std::string cli = argv[1];
  const fs::path scenario_dir = argv[2];
  const auto suite = measure_suite();

  criterion(1, "Wiener mean square recovers sum of squared atoms", [&](std::ostream& d) {
    const auto start = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (const auto& t : suite) {
      const auto r = wiener_atom_recovery(t.measure, 10000);
      worst = std::max(worst, std::abs(r.mean_square - t.sum_of_squared_atoms()));
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    d << "worst error " << worst << " (tol 0.05), " << seconds << " s for 20 measures (limit 5 s)";
    return worst <= 0.05 && seconds < 5.0;
  });

  criterion(2, "Cesaro mean recovers the atom at the trivial character", [&](std::ostream& d) {
    double worst = 0.0;
    for (const auto& t : suite) {
      const auto r = wiener_atom_recovery(t.measure, 10000);
      worst = std::max(worst, std::abs(r.atom_at_one() - t.atom_mass_at_zero()));
    }
    d << "worst error " << worst << " (tol 0.05)";
    return worst <= 0.05;
  });

  criterion(3, "commutant projection vs eigenprojector and Cesaro oracles", [&](std::ostream& d) {
    double eig = 0.0, ces = 0.0, props = 0.0;
    std::mt19937_64 rng(1003);
    for (const auto& inst : unitary_suite(1002)) {
      const auto rep = UnitaryRep::cyclic(inst.known.u);
      const auto dec = decompose(rep);
      const Matrix a = oracle::random_matrix(inst.d, rng);
      const Matrix pa = commutant_projection(rep, dec, a);
      Matrix want = Matrix::Zero(inst.d, inst.d);
      for (const auto& p : inst.known.projectors) want += p * a * p;
      eig = std::max(eig, (pa - want).norm());
      ces = std::max(ces, (pa - cesaro_conjugation_mean(rep, a, 10000)).norm());
      const Matrix h = a + a.adjoint();
      const Matrix ph = commutant_projection(rep, dec, h);
      props = std::max({props, (commutant_projection(rep, dec, pa) - pa).norm(), std::abs(pa.trace() - a.trace()),
                        (ph - ph.adjoint()).norm()});
    }
    d << "eigenprojector " << eig << " (tol 1e-10), Cesaro " << ces << " (tol 1e-2), idempotence/trace/adjoint "
      << props << " (tol 1e-10)";
    return eig < 1e-10 && ces < 1e-2 && props < 1e-10;
  });

  criterion(4, "closed-form mean square vs Cesaro oracle and upper bound", [&](std::ostream& d) {
    double ces = 0.0;
    double violation = 0.0;
    std::mt19937_64 rng(1005);
    for (const auto& inst : unitary_suite(1004)) {
      const auto rep = UnitaryRep::cyclic(inst.known.u);
      const auto dec = decompose(rep);
      const Vector x = oracle::random_vector(inst.d, rng).normalized();
      const Vector y = oracle::random_vector(inst.d, rng).normalized();
      const double closed = mean_square_coefficient(rep, dec, x, y);
      ces = std::max(ces, std::abs(closed - cesaro_mean_square(rep, x, y, 10000)));
      violation = std::max(violation, closed - mean_square_upper_bound(rep, dec, x, y));
    }
    d << "Cesaro " << ces << " (tol 1e-2), max(mean - bound) " << violation;
    return ces < 1e-2 && violation <= 1e-12;
  });

  criterion(5, "Bernoulli witness on powers of two", [&](std::ostream& d) {
    bool ok = true;
    for (double eps : {0.5, 0.1, 0.02}) {
      const auto a = bernoulli_schedule(eps, 40);
      const auto w = bernoulli_witness(a, 40);
      double sup = 0.0, slack = 1.0, product_gap = 0.0;
      for (std::size_t k = 0; k <= 30; ++k) {
        const auto n = std::int64_t{1} << k;
        const cplx got = fourier_coefficient(w.measure, n).value;
        // independent product over the atoms 2^{-(j+1)}
        std::complex<long double> want = 1.0L;
        for (std::size_t j = 0; j < a.size(); ++j) {
          const long double aj = a[j];
          const long double turn = j + 1 <= k ? 0.0L : std::ldexp(1.0L, static_cast<int>(k) - static_cast<int>(j) - 1);
          want *= (1.0L - aj) + aj * std::polar(1.0L, 2.0L * std::numbers::pi_v<long double> * turn);
        }
        product_gap = std::max(product_gap, std::abs(got - cplx(want)));
        const double dev = std::abs(got - 1.0);
        const double ak1 = std::min(eps / (4.0 * std::numbers::pi), eps / (4.0 * std::numbers::pi * static_cast<double>(k + 1)));
        sup = std::max(sup, dev);
        slack = std::min(slack, 2.0 * std::numbers::pi * ak1 - dev);
      }
      d << "eps=" << eps << ": sup " << sup << ", min bound slack " << slack << ", product gap " << product_gap << "; ";
      ok = ok && sup < eps && slack >= 0.0 && product_gap < 1e-13;
    }
    std::mt19937_64 rng(1006);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double expansion = 0.0;
    for (std::size_t depth = 1; depth <= 12; ++depth) {
      std::vector<double> a(depth);
      double prev = 0.5;
      for (auto& x : a) prev = x = prev * (0.5 + 0.5 * unit(rng));
      const auto w = bernoulli_witness(a, depth);
      const auto e = expand_atoms(w.measure);
      for (std::int64_t n = -200; n <= 200; ++n) {
        expansion = std::max(expansion, std::abs(fourier_coefficient(w.measure, n).value - fourier_coefficient(e, n).value));
      }
    }
    d << "atom expansion J<=12: " << expansion << " (tol 1e-13)";
    return ok && expansion < 1e-13;
  });

  criterion(6, "inequality chain and Cauchy-Schwarz bracket", [&](std::ostream& d) {
    std::mt19937_64 rng(1007);
    double min_slack = std::numeric_limits<double>::infinity();
    double bracket = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 100; ++i) {
      const auto t = oracle::random_test_measure(rng, 1024, i % 3 == 0);
      const auto v = example_b_certificate(t.measure, 15, {.recovery_count = 1000});
      for (const auto& e : v.trace) min_slack = std::min(min_slack, e.slack());
      for (std::int64_t k = 1; k <= 16; ++k) {
        const auto b = cauchy_schwarz_bracket(t.measure, k);
        bracket = std::min({bracket, b.middle - b.lower, b.upper - b.middle});
      }
    }
    d << "min chain slack " << min_slack << ", min bracket slack " << bracket << " on 100 measures";
    return min_slack >= 0.0 && bracket >= -1e-12;
  });

  criterion(7, "Weyl scans and exact wrap arithmetic", [&](std::ostream& d) {
    const auto squares = IntegerSequence::polynomial({1, 0, 0});
    double worst_decay = 0.0;
    for (const char* name : {"sqrt2", "golden"}) {
      for (const auto& r : weyl_criterion_scan(squares, parse_phase(name), 4, 100000)) {
        worst_decay = std::max(worst_decay, r.magnitude);
      }
    }
    const double third = weyl_report(IntegerSequence::lacunary(2), RationalTurn::make(1, 3), 100000, 1).magnitude;

    std::mt19937_64 rng(1008);
    const std::vector<IntegerSequence> seqs = {squares, IntegerSequence::lacunary(2, 1), IntegerSequence::lacunary(2),
                                               IntegerSequence::polynomial({3, 1})};
    double worst_wrap = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const auto& s = seqs[static_cast<std::size_t>(i) % seqs.size()];
      const std::uint64_t h = 1 + rng() % 8;
      if (i % 2 == 0) {
        const std::uint64_t q = 2 + rng() % (std::uint64_t{1} << 40);
        const std::uint64_t p = rng() % q;
        const std::uint64_t k = rng() % 400;
        const Phase theta = RationalTurn::make(static_cast<std::int64_t>(p), q);
        const auto& rt = std::get<RationalTurn>(theta);
        worst_wrap = std::max(worst_wrap, oracle::circular_gap(wrapped_product(s, k, theta, h),
                                                               oracle::rational_wrap(s.term(k) * h, rt.num, rt.den)));
      } else {
        const std::string name = i % 4 == 1 ? "sqrt2" : "golden";
        std::uint64_t k = 0;
        do {
          k = rng() % 2000;
        } while (s.term(k) * h >= (BigInt(1) << 27) || s.term(k) * h <= -(BigInt(1) << 27));
        worst_wrap = std::max(worst_wrap,
                              oracle::circular_gap(wrapped_product(s, k, approx(parse_phase(name)), h),
                                                   oracle::irrational_wrap(s.term(k) * h, oracle::scaled_irrational(name))));
      }
    }
    d << "k^2 max |S_N| " << worst_decay << " (tol 0.05), 2^k at 1/3 " << third << " (>= 0.2), wrap error 2^"
      << (worst_wrap > 0.0 ? std::log2(worst_wrap) : -1000.0) << " (< 2^-100)";
    return worst_decay < 0.05 && third >= 0.2 && worst_wrap < std::ldexp(1.0, -100);
  });

  criterion(8, "tensor products", [&](std::ostream& d) {
    std::mt19937_64 rng(1009);
    double kron = 0.0;
    for (int i = 0; i < 100; ++i) {
      const std::size_t length = 1 + rng() % 4;
      std::vector<Slot> slots;
      ElementaryVector x, y;
      for (std::size_t n = 0; n < length; ++n) {
        const auto dim = static_cast<Eigen::Index>(1 + rng() % 3);
        slots.push_back({UnitaryRep::cyclic(haar_unitary(dim, rng)), oracle::random_vector(dim, rng).normalized()});
        if (rng() % 4 != 0) x.slots[n] = oracle::random_vector(dim, rng);
        if (rng() % 4 != 0) y.slots[n] = oracle::random_vector(dim, rng);
      }
      const RepSequence seq(slots);
      const std::int64_t g = static_cast<std::int64_t>(rng() % 7) - 3;
      Matrix big = Matrix::Identity(1, 1);
      Vector xs = Vector::Ones(1), ys = Vector::Ones(1);
      for (std::size_t n = 0; n < length; ++n) {
        const Matrix& u = slots[n].rep.generator(0);
        Matrix un = Matrix::Identity(u.rows(), u.cols());
        for (int e = 0; e < std::abs(g); ++e) un = un * (g > 0 ? u : Matrix(u.adjoint()));
        big = oracle::kron(big, un);
        xs = oracle::kron(xs, x.component(seq, n));
        ys = oracle::kron(ys, y.component(seq, n));
      }
      kron = std::max(kron, std::abs(elementary_coefficient(seq, {g}, x, y) - ys.dot(big * xs)));
    }

    double bound_violation = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < 100; ++i) {
      std::vector<Slot> slots;
      for (std::size_t n = 0; n < 1 + rng() % 8; ++n) {
        const auto dim = static_cast<Eigen::Index>(1 + rng() % 3);
        slots.push_back({UnitaryRep::cyclic(haar_unitary(dim, rng)), oracle::random_vector(dim, rng).normalized()});
      }
      std::vector<GroupWord> q;
      for (std::int64_t k = -4; k <= 4; ++k) q.push_back({k});
      for (const auto& e : invariance_defect_tensor(RepSequence(slots), q).entries) {
        bound_violation = std::max(bound_violation, e.defect * e.defect - e.bound);
      }
    }

    std::vector<Slot> family;
    for (std::size_t n = 1; n <= 24; ++n) {
      std::vector<double> phases(n);
      for (std::size_t k = 0; k < n; ++k) phases[k] = oracle::two_pi * static_cast<double>(k) / static_cast<double>(n);
      family.push_back({UnitaryRep::diagonal(phases), Vector::Ones(static_cast<Eigen::Index>(n)) / std::sqrt(static_cast<double>(n))});
    }
    const auto diag = prop_4_3_diagnostic(RepSequence(family));
    double vn = 0.0;
    for (std::size_t n = 1; n <= diag.values.size(); ++n) vn = std::max(vn, std::abs(diag.values[n - 1] - 1.0 / static_cast<double>(n)));
    d << "Kronecker " << kron << " (tol 1e-12), max(defect^2 - bound) " << bound_violation << ", |v_n - 1/n| " << vn
      << " (tol 1e-12)";
    return kron < 1e-12 && bound_violation <= 1e-12 && vn < 1e-12;
  });

  criterion(9, "Heisenberg and affine groups", [&](std::ostream& d) {
    std::mt19937_64 rng(1010);
    std::uniform_real_distribution<double> coord(-5.0, 5.0);
    std::uniform_real_distribution<double> log_a(-0.5, 0.5);
    double law = 0.0;
    auto gap_h = [](const HeisenbergElement& a, const HeisenbergElement& b) {
      return std::max({std::abs(a.t - b.t), std::abs(a.q[0] - b.q[0]), std::abs(a.p[0] - b.p[0])});
    };
    auto gap_a = [](const AffineElement& a, const AffineElement& b) { return std::max(std::abs(a.a - b.a), std::abs(a.b - b.b)); };
    for (int i = 0; i < 1000; ++i) {
      const HeisenbergElement a{coord(rng), {coord(rng)}, {coord(rng)}};
      const HeisenbergElement b{coord(rng), {coord(rng)}, {coord(rng)}};
      const HeisenbergElement c{coord(rng), {coord(rng)}, {coord(rng)}};
      law = std::max({law, gap_h((a * b) * c, a * (b * c)), gap_h(a * a.inverse(), HeisenbergElement::identity(1))});
      const AffineElement x(std::exp(log_a(rng)), coord(rng));
      const AffineElement y(std::exp(log_a(rng)), coord(rng));
      const AffineElement z(std::exp(log_a(rng)), coord(rng));
      law = std::max({law, gap_a((x * y) * z, x * (y * z)), gap_a(x * x.inverse(), AffineElement{})});
    }

    const auto u = WindowFunction::gaussian();
    const double schrodinger = schrodinger_decay_scan(1.0, u, u, 10.0, 10.0).decay_factor();
    const auto f = WindowFunction::bump({}, 2.0, 1.0);
    const double affine = affine_decay_scan(HalfLine::positive, 1.0, f, f, 50.0, 50.0).decay_factor();

    double unitarity = 0.0;
    std::uniform_real_distribution<double> small(-3.0, 3.0);
    for (int i = 0; i < 50; ++i) {
      const HeisenbergElement g{small(rng), {small(rng)}, {small(rng)}};
      unitarity = std::max(unitarity, std::abs(apply_schrodinger(i % 2 ? 1.0 : -1.0, g, u).norm() - 1.0));
      const AffineElement h(std::exp(log_a(rng)), small(rng));
      unitarity = std::max(unitarity, std::abs(apply_affine(HalfLine::positive, h, f).norm() - 1.0));
    }
    d << "group laws " << law << " (tol 1e-12), Schrodinger decay x" << schrodinger << ", affine decay x" << affine
      << " (>= 100), unitarity " << unitarity << " (tol 1e-8)";
    return law < 1e-12 && schrodinger >= 100.0 && affine >= 100.0 && unitarity < 1e-8;
  });

  criterion(10, "CLI scenarios are byte-identical across runs", [&](std::ostream& d) {
    const auto root = fs::temp_directory_path() / ("kazlab_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(root);
    std::size_t scenarios = 0, files = 0;
    std::vector<std::string> problems;
    std::vector<fs::path> inputs;
    for (const auto& e : fs::directory_iterator(scenario_dir)) {
      if (e.path().extension() == ".json") inputs.push_back(e.path());
    }
    std::sort(inputs.begin(), inputs.end());
    for (const auto& s : inputs) {
      ++scenarios;
      for (const char* run : {"a", "b"}) {
        const auto out = root / run;
        const std::string cmd =
            shell_quote(cli) + " run " + shell_quote(s.string()) + " --out-dir " + shell_quote(out.string()) + " > /dev/null";
        if (std::system(cmd.c_str()) != 0) problems.push_back(s.filename().string() + " exited nonzero");
      }
    }
    for (const auto& e : fs::directory_iterator(root / "a")) {
      ++files;
      const auto other = root / "b" / e.path().filename();
      if (!fs::exists(other) || read_file(e.path()) != read_file(other)) problems.push_back(e.path().filename().string());
    }
    fs::remove_all(root);
    d << scenarios << " scenarios, " << files << " output files compared";
    for (const auto& p : problems) d << "; differs: " << p;
    return scenarios > 0 && files >= scenarios && problems.empty();
  });

  return failures == 0 ? 0 : 1;
}
