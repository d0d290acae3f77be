#pragma once

#include <vector>

#include "hbfsm/numerics.hpp"

namespace hbfsm {

// Unit-average-energy constellation. points[label] is the symbol whose
// Gray-coded bit label equals `label`; for square QAM the first half of the
// label bits selects the I level, the second half the Q level, each through
// a binary-reflected Gray code, so geometrically adjacent points differ in
// exactly one bit.
struct Constellation {
  int m = 0;
  int bits = 0;
  std::vector<cd> points;
};

Constellation build_constellation(int m);  // m in {2, 4, 16, 64}

struct SmSymbol {
  int aa_index = 1;  // one-based
  int label = 0;     // constellation bit label
  cd s;
};

// MSB-first: the first log2(n_a) bits pick the AA, the rest the symbol.
SmSymbol sm_map(const std::vector<int>& bits, int n_a, const Constellation& c);
std::vector<int> sm_unmap(const SmSymbol& sym, int n_a, const Constellation& c);

}  // namespace hbfsm
