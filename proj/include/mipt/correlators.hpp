// Majorana two-point blocks and connected spin-spin
// correlators of a Gaussian state.
//
// Spin operators in terms of A_j = c_j^dag + c_j, B_j = c_j^dag - c_j and the
// Jordan-Wigner string S_j = prod_{k<j} A_k B_k:
//   sigma^x_j = S_j A_j,  sigma^y_j = i S_j B_j,  sigma^z_j = A_j B_j.
// Site indices are 0-based.

#pragma once

#include <array>
#include <string>
#include <vector>

#include "mipt/gaussian_state.hpp"

namespace mipt {

struct MajoranaBlocks {
  CMatrix AA;  // <A_m A_n>
  CMatrix BB;  // <B_m B_n>
  CMatrix AB;  // <A_m B_n>
  CMatrix BA;  // <B_m A_n>

  int L() const { return static_cast<int>(AA.rows()); }
};

/// Translation-invariant blocks from the momentum-space amplitudes (u_k, v_k).
MajoranaBlocks blocks_from_amplitudes(const std::vector<VacuumAmplitude>& amps, int L);

/// Exact linear re-expression of (C, F).
MajoranaBlocks blocks_from_state(const CorrelationState& state);

MajoranaBlocks blocks_from_covariance(const RMatrix& gamma);
RMatrix covariance_from_blocks(const MajoranaBlocks& blocks);

/// Longitudinal correlators from the block-structured Pfaffian formulas,
/// 0 <= m < n < L. These are the open-chain windows; wrap-around pairs are
/// handled by SpinStringEvaluator.
cplx spin_xx(const MajoranaBlocks& blocks, int m, int n);
cplx spin_yy(const MajoranaBlocks& blocks, int m, int n);
cplx spin_xy(const MajoranaBlocks& blocks, int m, int n);

/// Connected zz correlator, entrywise products of block elements.
CMatrix spin_zz(const MajoranaBlocks& blocks);

enum class Spin { X, Y, Z };

/// <sigma^a_i sigma^b_j> for i != j and a, b in {X, Y}, as expectation values
/// of Majorana strings evaluated by real Pfaffians of the covariance. When the
/// direct string between the two sites is longer than half the chain, the
/// complementary string times the global parity is used instead.
class SpinStringEvaluator {
 public:
  explicit SpinStringEvaluator(RMatrix gamma);

  cplx pair(Spin a, Spin b, int i, int j) const;
  double parity() const { return parity_; }
  int L() const { return L_; }

  struct Op {
    bool is_b;
    int site;
  };
  /// Expectation of A/B operators in the given order (distinct operators).
  cplx string_expectation(const std::vector<Op>& ops) const;

 private:
  cplx ordered_pair(Spin a, Spin b, int m, int n) const;
  cplx via_complement(const std::vector<Op>& ops) const;

  RMatrix gamma_;
  int L_;
  double parity_;
};

enum class Block { XX, YY, ZZ, XY, YX };
inline constexpr std::array<Block, 5> kAllBlocks{Block::XX, Block::YY, Block::ZZ, Block::XY,
                                                 Block::YX};
const char* block_name(Block b);
Block parse_block(const std::string& name);

struct SpinCorrelationTensor {
  int L{0};
  CMatrix xx, yy, zz, xy, yx;
  // xz, yz, zx, zy vanish identically in the even-parity sector.
  static constexpr bool mixed_z_blocks_zero = true;

  const CMatrix& operator[](Block b) const;
  CMatrix& operator[](Block b);
  /// Element of any of the nine blocks (structural zeros included).
  cplx value(Spin a, Spin b, int i, int j) const;
};

SpinCorrelationTensor correlation_tensor(const CorrelationState& state);
SpinCorrelationTensor correlation_tensor(const RMatrix& gamma);

/// Toeplitz fast path: computes one row per block and fills by translation.
SpinCorrelationTensor correlation_tensor(const std::vector<VacuumAmplitude>& amps, int L);
SpinCorrelationTensor translation_invariant_tensor(const RMatrix& gamma);

/// (1/L) sum_i |C_{i, i+ell}| with periodic wrap, 1 <= ell <= L/2.
double averaged_abs_correlator(const SpinCorrelationTensor& tensor, Block block, int ell);

/// Same quantity for ell = 1..ell_max straight from the covariance, without
/// building the full tensor.
std::vector<double> averaged_abs_profile(const RMatrix& gamma, Block block, int ell_max);

}  // namespace mipt
