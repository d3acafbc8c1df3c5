#include "dimer/numerics/eig.hpp"

#include "dimer/core.hpp"

#include <cmath>
#include <string>

namespace dimer::numerics {
namespace {

template <class C>
struct Givens {
  real_t<C> c;
  C s;
};

// G = [[c, s], [-conj(s), c]] with G * (p, q)^T = (r, 0)^T.
template <class C>
Givens<C> make_givens(const C& p, const C& q) {
  using std::abs;
  using std::conj;
  using std::sqrt;
  using R = real_t<C>;
  const R ap = abs(p);
  const R aq = abs(q);
  if (aq == R(0)) return {R(1), C(0)};
  if (ap == R(0)) return {R(0), conj(q) / aq};
  const R rho = sqrt(ap * ap + aq * aq);
  return {ap / rho, (p / ap) * conj(q) / rho};
}

// Rows i, i+1 <- G * rows, restricted to columns [j0, j1).
template <class C>
void rotate_rows(Matrix<C>& m, std::size_t i, const Givens<C>& g, std::size_t j0, std::size_t j1) {
  using std::conj;
  for (std::size_t j = j0; j < j1; ++j) {
    const C x = m(i, j);
    const C y = m(i + 1, j);
    m(i, j) = g.c * x + g.s * y;
    m(i + 1, j) = -conj(g.s) * x + g.c * y;
  }
}

// Columns i, i+1 <- columns * G^H, restricted to rows [r0, r1).
template <class C>
void rotate_cols(Matrix<C>& m, std::size_t i, const Givens<C>& g, std::size_t r0, std::size_t r1) {
  using std::conj;
  for (std::size_t r = r0; r < r1; ++r) {
    const C x = m(r, i);
    const C y = m(r, i + 1);
    m(r, i) = x * g.c + y * conj(g.s);
    m(r, i + 1) = -x * g.s + y * g.c;
  }
}

// In-place reduction to upper Hessenberg form, accumulating Q (A = Q H Q^H).
template <class C>
void hessenberg(Matrix<C>& h, Matrix<C>* q) {
  using std::abs;
  using std::conj;
  using std::sqrt;
  using R = real_t<C>;
  const std::size_t n = h.rows();
  std::vector<C> v(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    R xnorm2(0);
    for (std::size_t i = k + 1; i < n; ++i) xnorm2 += abs(h(i, k)) * abs(h(i, k));
    if (xnorm2 == R(0)) continue;
    const R xnorm = sqrt(xnorm2);
    const C x0 = h(k + 1, k);
    const R ax0 = abs(x0);
    const C phase = ax0 == R(0) ? C(1) : x0 / ax0;
    const C alpha = -phase * xnorm;
    for (std::size_t i = 0; i < n; ++i) v[i] = C(0);
    v[k + 1] = x0 - alpha;
    for (std::size_t i = k + 2; i < n; ++i) v[i] = h(i, k);
    R vnorm2(0);
    for (std::size_t i = k + 1; i < n; ++i) vnorm2 += abs(v[i]) * abs(v[i]);
    if (vnorm2 == R(0)) continue;
    const R beta = R(2) / vnorm2;
    // H <- (I - beta v v^H) H
    for (std::size_t j = 0; j < n; ++j) {
      C dotv(0);
      for (std::size_t i = k + 1; i < n; ++i) dotv += conj(v[i]) * h(i, j);
      dotv *= beta;
      for (std::size_t i = k + 1; i < n; ++i) h(i, j) -= v[i] * dotv;
    }
    // H <- H (I - beta v v^H)
    for (std::size_t i = 0; i < n; ++i) {
      C dotv(0);
      for (std::size_t j = k + 1; j < n; ++j) dotv += h(i, j) * v[j];
      dotv *= beta;
      for (std::size_t j = k + 1; j < n; ++j) h(i, j) -= dotv * conj(v[j]);
    }
    if (q != nullptr) {
      for (std::size_t i = 0; i < n; ++i) {
        C dotv(0);
        for (std::size_t j = k + 1; j < n; ++j) dotv += (*q)(i, j) * v[j];
        dotv *= beta;
        for (std::size_t j = k + 1; j < n; ++j) (*q)(i, j) -= dotv * conj(v[j]);
      }
    }
    h(k + 1, k) = alpha;
    for (std::size_t i = k + 2; i < n; ++i) h(i, k) = C(0);
  }
}

// Wilkinson shift from the trailing 2x2 block of the active window.
template <class C>
C wilkinson_shift(const Matrix<C>& t, std::size_t iu, int iter) {
  using std::sqrt;
  using R = real_t<C>;
  using std::abs;
  if (iter == 10 || iter == 20) {
    // exceptional shift
    R s = abs(t(iu, iu - 1).real());
    if (iu >= 2) s += abs(t(iu - 1, iu - 2).real());
    return C(s) + t(iu, iu);
  }
  C a = t(iu - 1, iu - 1);
  C b = t(iu - 1, iu);
  C c = t(iu, iu - 1);
  C d = t(iu, iu);
  const R scale = abs1(a) + abs1(b) + abs1(c) + abs1(d);
  if (scale == R(0)) return d;
  a /= scale;
  b /= scale;
  c /= scale;
  d /= scale;
  const C bc = b * c;
  const C diff = a - d;
  const C disc = sqrt(diff * diff + R(4) * bc);
  const C det = a * d - bc;
  const C tr = a + d;
  C e1 = (tr + disc) / R(2);
  C e2 = (tr - disc) / R(2);
  if (abs1(e1) > abs1(e2)) {
    e2 = det / e1;
  } else if (abs1(e2) != R(0)) {
    e1 = det / e2;
  }
  return scale * (abs1(e1 - d) < abs1(e2 - d) ? e1 : e2);
}

// Complex Schur form T = Z^H A Z via implicit single-shift QR on Hessenberg T.
template <class C>
void schur(Matrix<C>& t, Matrix<C>* z) {
  using R = real_t<C>;
  const std::size_t n = t.rows();
  if (n <= 1) return;
  const R eps = epsilon_of<C>();
  const R tiny = std::numeric_limits<R>::min();
  const int max_iter_per_eig = 60;
  std::size_t iu = n - 1;
  int iter = 0;
  long total = 0;
  const long max_total = static_cast<long>(max_iter_per_eig) * static_cast<long>(n);

  auto negligible = [&](std::size_t i) {
    const R sub = abs1(t(i, i - 1));
    const R ref = abs1(t(i - 1, i - 1)) + abs1(t(i, i));
    return sub <= eps * ref || sub <= tiny;
  };

  while (true) {
    while (iu > 0 && negligible(iu)) {
      t(iu, iu - 1) = C(0);
      --iu;
      iter = 0;
    }
    if (iu == 0) break;
    ++iter;
    ++total;
    if (iter > max_iter_per_eig || total > max_total) {
      throw NumericalError("eig_complex: QR iteration did not converge for eigenvalue index " +
                           std::to_string(iu));
    }
    std::size_t il = iu - 1;
    while (il > 0 && !negligible(il)) --il;

    const C shift = wilkinson_shift(t, iu, iter);
    Givens<C> g = make_givens(C(t(il, il) - shift), t(il + 1, il));
    rotate_rows(t, il, g, il, n);
    rotate_cols(t, il, g, 0, std::min(il + 2, iu) + 1);
    if (z != nullptr) rotate_cols(*z, il, g, 0, n);

    for (std::size_t i = il + 1; i < iu; ++i) {
      g = make_givens(t(i, i - 1), t(i + 1, i - 1));
      rotate_rows(t, i, g, i - 1, n);
      t(i + 1, i - 1) = C(0);
      rotate_cols(t, i, g, 0, std::min(i + 2, iu) + 1);
      if (z != nullptr) rotate_cols(*z, i, g, 0, n);
    }
  }
}

template <class C>
Spectrum<C> eig_impl(const Matrix<C>& a, bool compute_vectors) {
  using std::abs;
  using std::sqrt;
  using R = real_t<C>;
  if (!a.square() || a.rows() == 0) throw std::invalid_argument("eig_complex: matrix must be square, d >= 1");
  if (a.rows() > kEigMaxDimension) throw std::invalid_argument("eig_complex: dimension above dense limit");
  if (!a.all_finite()) throw std::invalid_argument("eig_complex: non-finite entries");
  const std::size_t n = a.rows();

  Matrix<C> t = a;
  Matrix<C> z;
  if (compute_vectors) z = Matrix<C>::identity(n);
  hessenberg(t, compute_vectors ? &z : nullptr);
  schur(t, compute_vectors ? &z : nullptr);

  Spectrum<C> out;
  out.eigenvalues.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.eigenvalues[i] = t(i, i);
  out.ill_conditioned.assign(n, false);
  if (!compute_vectors) return out;

  const R eps = epsilon_of<C>();
  const R tnorm = norm_frobenius(t);
  const R small = eps * (tnorm > R(0) ? tnorm : R(1));
  Matrix<C> x(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const C lambda = t(k, k);
    std::vector<C> col(n, C(0));
    col[k] = C(1);
    for (std::size_t jj = k; jj-- > 0;) {
      C acc(0);
      for (std::size_t m = jj + 1; m <= k; ++m) acc += t(jj, m) * col[m];
      C denom = t(jj, jj) - lambda;
      if (abs(denom) < small) {
        denom = C(small);
        out.ill_conditioned[k] = true;
      }
      col[jj] = -acc / denom;
      // rescale to keep entries bounded for nearly defective pairs
      const R big = abs(col[jj]);
      if (big > R(1e100)) {
        for (auto& e : col) e /= big;
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      C acc(0);
      for (std::size_t m = 0; m <= k; ++m) acc += z(i, m) * col[m];
      x(i, k) = acc;
    }
    R nrm(0);
    for (std::size_t i = 0; i < n; ++i) nrm += abs(x(i, k)) * abs(x(i, k));
    nrm = sqrt(nrm);
    for (std::size_t i = 0; i < n; ++i) x(i, k) /= nrm;
  }

  // residual flags
  const R anorm = norm_frobenius(a);
  for (std::size_t k = 0; k < n; ++k) {
    R res2(0);
    for (std::size_t i = 0; i < n; ++i) {
      C acc(0);
      for (std::size_t j = 0; j < n; ++j) acc += a(i, j) * x(j, k);
      acc -= out.eigenvalues[k] * x(i, k);
      res2 += abs(acc) * abs(acc);
    }
    if (sqrt(res2) > R(kEigResidualTol) * (anorm > R(0) ? anorm : R(1))) out.ill_conditioned[k] = true;
  }
  out.eigenvectors = std::move(x);
  return out;
}

}  // namespace

ComplexSpectrum eig_complex(const ComplexMatrix& a, bool compute_vectors) {
  return eig_impl(a, compute_vectors);
}

Spectrum<cquad> eig_complex(const QuadMatrix& a, bool compute_vectors) {
  return eig_impl(a, compute_vectors);
}

double eig_residual(const ComplexMatrix& a, const ComplexSpectrum& spec) {
  if (!spec.eigenvectors) throw std::invalid_argument("eig_residual: spectrum has no eigenvectors");
  const auto& v = *spec.eigenvectors;
  ComplexMatrix r = a * v;
  for (std::size_t i = 0; i < r.rows(); ++i)
    for (std::size_t k = 0; k < r.cols(); ++k) r(i, k) -= v(i, k) * spec.eigenvalues[k];
  const double an = norm_frobenius(a);
  return norm_frobenius(r) / (an > 0.0 ? an : 1.0);
}

}  // namespace dimer::numerics
