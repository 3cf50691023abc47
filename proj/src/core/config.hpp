#pragma once
// Electronic configurations: shells with spin-resolved occupancies, parsed
// from compact state labels, plus the determinant-ensemble occupation
// statistics that drive every two-electron weight downstream.

#include "core/eigensolver.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace boxatom {

enum class Mode { x_only, xc_wigner, xc_lyp };

const char* to_string(Mode mode);
Mode mode_from_string(const std::string& name); // throws std::invalid_argument

enum class DeterminantRole { high_spin, ms0_average, closed_shell };

const char* to_string(DeterminantRole role);

struct ShellSpec {
  int n = 1;
  int l = 0;
  Spin spin = Spin::up;
  double occupancy = 0.0; // electrons in this (n, l, spin) shell
};

// A confined-atom state: nucleus, spin-resolved shells, and the determinant
// structure the state's energy expression averages over. For ms0_average the
// open shells carry half an electron per spin and the implied ensemble is the
// pair of spin-swapped determinants with equal weight.
struct Configuration {
  double Z = 0.0;
  std::vector<ShellSpec> shells;
  std::string term_label;
  DeterminantRole determinant_role = DeterminantRole::high_spin;

  double n_electrons() const;
  void validate() const; // throws std::invalid_argument

  // Ensemble occupation statistics over the determinant set:
  //   mean_occ(s)       = <N_s>
  //   pair_occ(s, t)    = <N_s N_t> for distinct shell entries
  //   pair_occ_same(s)  = <N_s (N_s - 1)> within one shell entry
  double mean_occ(std::size_t s) const;
  double pair_occ(std::size_t s, std::size_t t) const;
  double pair_occ_same(std::size_t s) const;

  // Index into shells, or npos when absent.
  std::size_t find(int n, int l, Spin spin) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

// Build a Configuration from a compact label: a configuration string of
// n + letter(+count) tokens separated by underscores where ambiguous,
// followed by _<multiplicity><L letter>. Examples: "1s2_1S", "1s2s_3S",
// "1s2p_1P", "1s3d_3D", "1s2_2s_2S", "1s2_2s2_1S", "1s_2S".
// Throws std::invalid_argument with the offending piece named.
Configuration configuration_from_label(double Z, const std::string& label);

} // namespace boxatom
