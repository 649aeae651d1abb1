#include "mipt/correlators.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "mipt/errors.hpp"
#include "mipt/pfaffian.hpp"

namespace mipt {

namespace {

const cplx I(0.0, 1.0);

cplx i_power(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

double sign_power(long k) { return (k % 2 == 0) ? 1.0 : -1.0; }

// Pfaffian of the assembled block matrix, antisymmetrized defensively.
cplx block_pfaffian(CMatrix m) {
  const double defect = (m + m.transpose()).cwiseAbs().maxCoeff();
  require(defect <= 1e-6, ErrorKind::Numerical,
          "assembled correlator matrix is not antisymmetric (defect " + std::to_string(defect) +
              ")");
  m = (0.5 * (m - m.transpose())).eval();
  return pfaffian<cplx>(std::move(m));
}

void check_pair(const MajoranaBlocks& b, int m, int n) {
  require(0 <= m && m < n && n < b.L(), ErrorKind::Contract,
          "Pfaffian correlator requires 0 <= m < n < L");
}

std::pair<Spin, Spin> block_spins(Block b) {
  switch (b) {
    case Block::XX: return {Spin::X, Spin::X};
    case Block::YY: return {Spin::Y, Spin::Y};
    case Block::ZZ: return {Spin::Z, Spin::Z};
    case Block::XY: return {Spin::X, Spin::Y};
    default: return {Spin::Y, Spin::X};
  }
}

}  // namespace

MajoranaBlocks blocks_from_amplitudes(const std::vector<VacuumAmplitude>& amps, int L) {
  require(L > 0 && L % 2 == 0 && static_cast<int>(amps.size()) == L / 2, ErrorKind::Contract,
          "blocks_from_amplitudes: need L/2 amplitude pairs");
  const auto ks = allowed_momenta(L);
  // Generators indexed by r = n - m + (L - 1).
  const int span = 2 * L - 1;
  std::vector<double> s_im(span, 0.0), c_diff(span, 0.0), s_re(span, 0.0);
  for (int idx = 0; idx < span; ++idx) {
    const double r = idx - (L - 1);
    for (std::size_t q = 0; q < ks.size(); ++q) {
      const cplx uv = amps[q].u * std::conj(amps[q].v);
      const double s = std::sin(ks[q] * r), c = std::cos(ks[q] * r);
      s_im[idx] += s * uv.imag();
      s_re[idx] += s * uv.real();
      c_diff[idx] += c * (std::norm(amps[q].u) - std::norm(amps[q].v));
    }
  }
  MajoranaBlocks b{CMatrix(L, L), CMatrix(L, L), CMatrix(L, L), CMatrix(L, L)};
  for (int m = 0; m < L; ++m) {
    for (int n = 0; n < L; ++n) {
      const int idx = n - m + L - 1;
      const double delta = (m == n) ? 1.0 : 0.0;
      const cplx imag_part = (4.0 / L) * I * s_im[idx];
      b.AA(m, n) = delta + imag_part;
      b.BB(m, n) = -delta + imag_part;
      b.AB(m, n) = (2.0 / L) * c_diff[idx] + (4.0 / L) * s_re[idx];
    }
  }
  b.BA = -b.AB.transpose();
  return b;
}

MajoranaBlocks blocks_from_state(const CorrelationState& state) {
  const int L = state.L();
  const CMatrix id = CMatrix::Identity(L, L);
  const CMatrix& C = state.C;
  const CMatrix Ct = C.transpose();
  const CMatrix& F = state.F;
  const CMatrix Fd = F.adjoint();
  MajoranaBlocks b;
  b.AA = id + C - Ct + F + Fd;
  b.BB = -id + Ct - C + F + Fd;
  b.AB = -id + Ct + C - F + Fd;
  b.BA = id - Ct - C - F + Fd;
  return b;
}

RMatrix covariance_from_blocks(const MajoranaBlocks& b) {
  const int L = b.L();
  const CMatrix id = CMatrix::Identity(L, L);
  RMatrix gamma(2 * L, 2 * L);
  gamma.topLeftCorner(L, L) = (I * (b.AA - id)).real();
  gamma.bottomRightCorner(L, L) = (-I * (b.BB + id)).real();
  gamma.topRightCorner(L, L) = b.AB.real();
  gamma.bottomLeftCorner(L, L) = b.BA.real();
  return gamma;
}

MajoranaBlocks blocks_from_covariance(const RMatrix& gamma) {
  require(gamma.rows() == gamma.cols() && gamma.rows() % 2 == 0, ErrorKind::Contract,
          "covariance must be square with even dimension");
  const Eigen::Index L = gamma.rows() / 2;
  const CMatrix id = CMatrix::Identity(L, L);
  MajoranaBlocks b;
  b.AA = id - I * gamma.topLeftCorner(L, L).cast<cplx>();
  b.BB = -id + I * gamma.bottomRightCorner(L, L).cast<cplx>();
  b.AB = gamma.topRightCorner(L, L).cast<cplx>();
  b.BA = gamma.bottomLeftCorner(L, L).cast<cplx>();
  return b;
}

cplx spin_xx(const MajoranaBlocks& b, int m, int n) {
  check_pair(b, m, n);
  const int d = n - m;
  const CMatrix id = CMatrix::Identity(b.L(), b.L());
  CMatrix mat(2 * d, 2 * d);
  mat.topLeftCorner(d, d) = (b.BB + id).block(m, m, d, d);
  mat.topRightCorner(d, d) = b.BA.block(m, m + 1, d, d);
  mat.bottomLeftCorner(d, d) = b.AB.block(m + 1, m, d, d);
  mat.bottomRightCorner(d, d) = (b.AA - id).block(m + 1, m + 1, d, d);
  return sign_power(static_cast<long>(d - 1) * d / 2) * block_pfaffian(std::move(mat));
}

cplx spin_yy(const MajoranaBlocks& b, int m, int n) {
  check_pair(b, m, n);
  const int d = n - m;
  const CMatrix id = CMatrix::Identity(b.L(), b.L());
  CMatrix mat(2 * d, 2 * d);
  mat.topLeftCorner(d, d) = (b.AA - id).block(m, m, d, d);
  mat.topRightCorner(d, d) = b.AB.block(m, m + 1, d, d);
  mat.bottomLeftCorner(d, d) = b.BA.block(m + 1, m, d, d);
  mat.bottomRightCorner(d, d) = (b.BB + id).block(m + 1, m + 1, d, d);
  return sign_power(static_cast<long>(d + 1) * d / 2) * block_pfaffian(std::move(mat));
}

cplx spin_xy(const MajoranaBlocks& b, int m, int n) {
  check_pair(b, m, n);
  const int d = n - m;
  const CMatrix id = CMatrix::Identity(b.L(), b.L());
  CMatrix mat(2 * d, 2 * d);
  mat.topLeftCorner(d + 1, d + 1) = (b.BB + id).block(m, m, d + 1, d + 1);
  if (d > 1) {
    mat.topRightCorner(d + 1, d - 1) = b.BA.block(m, m + 1, d + 1, d - 1);
    mat.bottomLeftCorner(d - 1, d + 1) = b.AB.block(m + 1, m, d - 1, d + 1);
    mat.bottomRightCorner(d - 1, d - 1) = (b.AA - id).block(m + 1, m + 1, d - 1, d - 1);
  }
  return I * sign_power(static_cast<long>(d + 1) * d / 2) * block_pfaffian(std::move(mat));
}

CMatrix spin_zz(const MajoranaBlocks& b) {
  return b.AB.cwiseProduct(b.BA) - b.AA.cwiseProduct(b.BB);
}

SpinStringEvaluator::SpinStringEvaluator(RMatrix gamma)
    : gamma_(0.5 * (gamma - gamma.transpose())), L_(static_cast<int>(gamma.rows() / 2)) {
  require(gamma_.rows() == gamma_.cols() && gamma_.rows() % 2 == 0, ErrorKind::Contract,
          "covariance must be square with even dimension");
  RMatrix canon(2 * L_, 2 * L_);
  for (int p = 0; p < 2 * L_; ++p) {
    const int ip = (p % 2 == 0) ? p / 2 : L_ + p / 2;
    for (int q = 0; q < 2 * L_; ++q) {
      const int iq = (q % 2 == 0) ? q / 2 : L_ + q / 2;
      canon(p, q) = gamma_(ip, iq);
    }
  }
  const double pf = pfaffian<double>(std::move(canon));
  require(std::abs(std::abs(pf) - 1.0) < 1e-6, ErrorKind::Numerical,
          "fermion parity " + std::to_string(pf) + " is not +-1; state is not pure");
  parity_ = pf > 0 ? 1.0 : -1.0;
}

cplx SpinStringEvaluator::string_expectation(const std::vector<Op>& ops) const {
  const int n = static_cast<int>(ops.size());
  require(n % 2 == 0, ErrorKind::Contract, "odd Majorana strings have zero expectation");
  if (n == 0) return 1.0;
  RMatrix sub(n, n);
  int n_b = 0;
  for (int p = 0; p < n; ++p) {
    const int ip = ops[p].is_b ? L_ + ops[p].site : ops[p].site;
    n_b += ops[p].is_b ? 1 : 0;
    for (int q = 0; q < n; ++q) {
      const int iq = ops[q].is_b ? L_ + ops[q].site : ops[q].site;
      sub(p, q) = gamma_(ip, iq);
    }
  }
  // <w_p w_q> = -i Gamma_pq for Hermitian Majoranas, and B = i b.
  return i_power(n_b) * i_power(-n / 2) * pfaffian<double>(std::move(sub));
}

// <S> = parity * <S P>, with P = prod_k A_k B_k. For S in canonical order,
// S P reduces to (-1)^{sum of canonical positions + #B} times the complement.
cplx SpinStringEvaluator::via_complement(const std::vector<Op>& ops) const {
  std::vector<char> used(2 * static_cast<std::size_t>(L_), 0);
  long exponent = 0;
  for (const auto& op : ops) {
    const int pos = 2 * op.site + (op.is_b ? 1 : 0);
    used[static_cast<std::size_t>(pos)] = 1;
    exponent += pos + (op.is_b ? 1 : 0);
  }
  std::vector<Op> rest;
  rest.reserve(2 * static_cast<std::size_t>(L_) - ops.size());
  for (int pos = 0; pos < 2 * L_; ++pos) {
    if (!used[static_cast<std::size_t>(pos)]) rest.push_back({pos % 2 == 1, pos / 2});
  }
  return parity_ * sign_power(exponent) * string_expectation(rest);
}

cplx SpinStringEvaluator::ordered_pair(Spin a, Spin b, int m, int n) const {
  // sigma^a_m sigma^b_n = prefactor * (first op at m) prod_{m<k<n} A_k B_k (last op at n)
  cplx prefactor;
  bool first_b, last_b;
  if (a == Spin::X && b == Spin::X) {
    prefactor = 1.0, first_b = true, last_b = false;
  } else if (a == Spin::Y && b == Spin::Y) {
    prefactor = -1.0, first_b = false, last_b = true;
  } else if (a == Spin::X && b == Spin::Y) {
    prefactor = I, first_b = true, last_b = true;
  } else {
    prefactor = I, first_b = false, last_b = false;
  }
  std::vector<Op> ops;
  ops.reserve(2 * static_cast<std::size_t>(n - m));
  ops.push_back({first_b, m});
  for (int k = m + 1; k < n; ++k) {
    ops.push_back({false, k});
    ops.push_back({true, k});
  }
  ops.push_back({last_b, n});

  const int direct_len = 2 * (n - m);
  if (direct_len < L_) return prefactor * string_expectation(ops);
  if (direct_len > L_) return prefactor * via_complement(ops);
  const cplx direct = string_expectation(ops);
  const cplx other = via_complement(ops);
  if (std::abs(direct - other) > 1e-8 * std::max(1.0, std::abs(direct))) {
    std::ostringstream msg;
    msg << "antipodal pair (" << m << ", " << n << "): direct " << direct
        << " and complementary " << other << " strings disagree";
    fail(ErrorKind::Numerical, msg.str());
  }
  return prefactor * direct;
}

cplx SpinStringEvaluator::pair(Spin a, Spin b, int i, int j) const {
  require(a != Spin::Z && b != Spin::Z, ErrorKind::Contract,
          "SpinStringEvaluator handles x/y components only");
  require(i != j && i >= 0 && j >= 0 && i < L_ && j < L_, ErrorKind::Contract,
          "SpinStringEvaluator::pair needs two distinct sites in range");
  // Operators on different sites commute.
  return i < j ? ordered_pair(a, b, i, j) : ordered_pair(b, a, j, i);
}

const char* block_name(Block b) {
  switch (b) {
    case Block::XX: return "xx";
    case Block::YY: return "yy";
    case Block::ZZ: return "zz";
    case Block::XY: return "xy";
    default: return "yx";
  }
}

Block parse_block(const std::string& name) {
  for (Block b : kAllBlocks) {
    if (name == block_name(b)) return b;
  }
  fail(ErrorKind::Parameter, "unknown correlator block '" + name + "'");
}

const CMatrix& SpinCorrelationTensor::operator[](Block b) const {
  switch (b) {
    case Block::XX: return xx;
    case Block::YY: return yy;
    case Block::ZZ: return zz;
    case Block::XY: return xy;
    default: return yx;
  }
}

CMatrix& SpinCorrelationTensor::operator[](Block b) {
  return const_cast<CMatrix&>(std::as_const(*this)[b]);
}

cplx SpinCorrelationTensor::value(Spin a, Spin b, int i, int j) const {
  if (a == Spin::Z && b == Spin::Z) return zz(i, j);
  if (a == Spin::Z || b == Spin::Z) return 0.0;
  if (a == Spin::X) return b == Spin::X ? xx(i, j) : xy(i, j);
  return b == Spin::X ? yx(i, j) : yy(i, j);
}

namespace {

SpinCorrelationTensor tensor_with_onsite(const RMatrix& gamma) {
  const int L = static_cast<int>(gamma.rows() / 2);
  SpinCorrelationTensor t;
  t.L = L;
  t.zz = spin_zz(blocks_from_covariance(gamma));
  t.xx = CMatrix::Zero(L, L);
  t.yy = CMatrix::Zero(L, L);
  t.xy = CMatrix::Zero(L, L);
  t.yx = CMatrix::Zero(L, L);
  for (int i = 0; i < L; ++i) {
    const double sz = gamma(i, L + i);
    t.xx(i, i) = 1.0;
    t.yy(i, i) = 1.0;
    t.xy(i, i) = I * sz;  // sigma^x sigma^y = i sigma^z
    t.yx(i, i) = -I * sz;
  }
  return t;
}

}  // namespace

SpinCorrelationTensor correlation_tensor(const RMatrix& gamma) {
  SpinCorrelationTensor t = tensor_with_onsite(gamma);
  const SpinStringEvaluator ev(gamma);
  const int L = t.L;
  for (int i = 0; i < L; ++i) {
    for (int j = i + 1; j < L; ++j) {
      t.xx(i, j) = t.xx(j, i) = ev.pair(Spin::X, Spin::X, i, j);
      t.yy(i, j) = t.yy(j, i) = ev.pair(Spin::Y, Spin::Y, i, j);
      const cplx xy = ev.pair(Spin::X, Spin::Y, i, j);
      const cplx yx = ev.pair(Spin::Y, Spin::X, i, j);
      t.xy(i, j) = xy;
      t.yx(j, i) = xy;
      t.yx(i, j) = yx;
      t.xy(j, i) = yx;
    }
  }
  return t;
}

SpinCorrelationTensor correlation_tensor(const CorrelationState& state) {
  return correlation_tensor(majorana_covariance(state));
}

SpinCorrelationTensor translation_invariant_tensor(const RMatrix& gamma) {
  SpinCorrelationTensor t = tensor_with_onsite(gamma);
  const SpinStringEvaluator ev(gamma);
  const int L = t.L;
  const std::array<Block, 4> blocks{Block::XX, Block::YY, Block::XY, Block::YX};
  for (Block blk : blocks) {
    const auto [a, b] = block_spins(blk);
    std::vector<cplx> row(static_cast<std::size_t>(L));
    for (int d = 1; d < L; ++d) row[static_cast<std::size_t>(d)] = ev.pair(a, b, 0, d);
    CMatrix& m = t[blk];
    for (int i = 0; i < L; ++i) {
      for (int j = 0; j < L; ++j) {
        if (i != j) m(i, j) = row[static_cast<std::size_t>(((j - i) % L + L) % L)];
      }
    }
  }
  return t;
}

SpinCorrelationTensor correlation_tensor(const std::vector<VacuumAmplitude>& amps, int L) {
  return translation_invariant_tensor(covariance_from_blocks(blocks_from_amplitudes(amps, L)));
}

double averaged_abs_correlator(const SpinCorrelationTensor& tensor, Block block, int ell) {
  const int L = tensor.L;
  require(ell >= 1 && ell <= L / 2, ErrorKind::Contract,
          "averaged_abs_correlator: distance must satisfy 1 <= ell <= L/2");
  const CMatrix& m = tensor[block];
  double sum = 0.0;
  for (int i = 0; i < L; ++i) sum += std::abs(m(i, (i + ell) % L));
  return sum / L;
}

std::vector<double> averaged_abs_profile(const RMatrix& gamma, Block block, int ell_max) {
  const int L = static_cast<int>(gamma.rows() / 2);
  require(ell_max >= 1 && ell_max <= L / 2, ErrorKind::Contract,
          "averaged_abs_profile: ell_max must satisfy 1 <= ell_max <= L/2");
  std::vector<double> out(static_cast<std::size_t>(ell_max), 0.0);
  if (block == Block::ZZ) {
    const CMatrix zz = spin_zz(blocks_from_covariance(gamma));
    for (int ell = 1; ell <= ell_max; ++ell) {
      double sum = 0.0;
      for (int i = 0; i < L; ++i) sum += std::abs(zz(i, (i + ell) % L));
      out[static_cast<std::size_t>(ell - 1)] = sum / L;
    }
    return out;
  }
  const SpinStringEvaluator ev(gamma);
  const auto [a, b] = block_spins(block);
  for (int ell = 1; ell <= ell_max; ++ell) {
    double sum = 0.0;
    for (int i = 0; i < L; ++i) sum += std::abs(ev.pair(a, b, i, (i + ell) % L));
    out[static_cast<std::size_t>(ell - 1)] = sum / L;
  }
  return out;
}

}  // namespace mipt
