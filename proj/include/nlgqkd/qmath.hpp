#ifndef NLGQKD_QMATH_HPP
#define NLGQKD_QMATH_HPP

#include <complex>
#include <string>
#include <vector>

namespace nlgqkd::qmath {

using cplx = std::complex<double>;

// Structural checks (completeness, PSD, involution) use kStructuralTol;
// algebraic identities (Hermiticity, trace, idempotence) use kAlgebraicTol.
inline constexpr double kStructuralTol = 1e-10;
inline constexpr double kAlgebraicTol = 1e-12;

// Dense row-major complex matrix. Everything in scope is <= 64-dimensional,
// so no sparse storage and no general eigensolver.
struct CMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<cplx> a;

  CMatrix() = default;
  CMatrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

  cplx& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  const cplx& at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

  static CMatrix identity(int n);
  static CMatrix zeros(int r, int c);

  CMatrix dagger() const;
  cplx trace() const;

  CMatrix operator+(const CMatrix& o) const;
  CMatrix operator-(const CMatrix& o) const;
  CMatrix operator*(const CMatrix& o) const;
  CMatrix operator*(cplx s) const;
  CMatrix& operator+=(const CMatrix& o);
};

CMatrix operator*(cplx s, const CMatrix& m);

// max_ij |a_ij - b_ij|
double max_abs_diff(const CMatrix& a, const CMatrix& b);
bool is_hermitian(const CMatrix& m, double tol = kAlgebraicTol);

CMatrix kron(const CMatrix& a, const CMatrix& b);

// name in {'I','X','Y','Z'}
CMatrix pauli(char name);

// Density operator; validate() enforces Hermiticity, unit trace and
// positivity (via nonnegative diagonal of m and Tr[m^2] <= 1 style checks
// plus a Gershgorin-free sufficient test done numerically).
struct QState {
  int dim = 0;
  CMatrix density;

  QState() = default;
  QState(int d, CMatrix m) : dim(d), density(std::move(m)) {}
  void validate() const;
};

struct EigProjector {
  double value;       // +1 or -1
  CMatrix projector;  // (I + value*O)/2
};

// Spectral projectors of an involutive Hermitian observable (O^2 = I).
// Rejects inputs whose square deviates from I beyond kStructuralTol.
std::vector<EigProjector> eig_projectors(const CMatrix& observable);

// Tr[rho * op]; throws if the imaginary residue exceeds kStructuralTol.
double expectation(const QState& state, const CMatrix& op);

// Partial trace over the subsystems listed in `traced` (indices into `dims`).
CMatrix partial_trace(const CMatrix& m, const std::vector<int>& dims,
                      const std::vector<int>& traced);

}  // namespace nlgqkd::qmath

#endif
