#include "hbfsm/constellation.hpp"

#include <cmath>
#include <stdexcept>

namespace hbfsm {

static int ilog2(int v) {
  int b = 0;
  while ((1 << b) < v) ++b;
  return b;
}

static int gray(int i) { return i ^ (i >> 1); }

Constellation build_constellation(int m) {
  if (m != 2 && m != 4 && m != 16 && m != 64)
    throw std::invalid_argument("build_constellation: m must be one of 2, 4, 16, 64");
  Constellation c;
  c.m = m;
  c.bits = ilog2(m);
  c.points.assign(m, cd(0, 0));
  if (m == 2) {
    c.points[0] = cd(1, 0);
    c.points[1] = cd(-1, 0);
    return c;
  }
  const int kh = c.bits / 2;          // bits per axis
  const int side = 1 << kh;
  const double scale = 1.0 / std::sqrt(2.0 * double(m - 1) / 3.0);
  for (int i = 0; i < side; ++i) {
    const double ai = double(2 * i - (side - 1));
    for (int q = 0; q < side; ++q) {
      const double aq = double(2 * q - (side - 1));
      const int label = (gray(i) << kh) | gray(q);
      c.points[label] = scale * cd(ai, aq);
    }
  }
  return c;
}

SmSymbol sm_map(const std::vector<int>& bits, int n_a, const Constellation& c) {
  const int ba = ilog2(n_a);
  if (int(bits.size()) != ba + c.bits)
    throw std::invalid_argument("sm_map: bit count != log2(n_a) + log2(m)");
  int aa = 0;
  for (int i = 0; i < ba; ++i) aa = (aa << 1) | (bits[i] & 1);
  int label = 0;
  for (int i = 0; i < c.bits; ++i) label = (label << 1) | (bits[ba + i] & 1);
  return {aa + 1, label, c.points[label]};
}

std::vector<int> sm_unmap(const SmSymbol& sym, int n_a, const Constellation& c) {
  const int ba = ilog2(n_a);
  std::vector<int> bits(ba + c.bits);
  const int aa = sym.aa_index - 1;
  for (int i = 0; i < ba; ++i) bits[i] = (aa >> (ba - 1 - i)) & 1;
  for (int i = 0; i < c.bits; ++i) bits[ba + i] = (sym.label >> (c.bits - 1 - i)) & 1;
  return bits;
}

}  // namespace hbfsm
