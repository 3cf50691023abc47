#include "core/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

namespace boxatom {
namespace {

constexpr double kOccEps = 1e-12;

bool is_integer_occ(double q) { return std::abs(q - std::round(q)) < kOccEps; }

int letter_to_l(char c) {
  switch (c) {
    case 's': return 0;
    case 'p': return 1;
    case 'd': return 2;
    case 'f': return 3;
    default: return -1;
  }
}

char l_to_term_letter(int L) {
  constexpr const char* letters = "SPDF";
  if (L < 0 || L > 3) return '?';
  return letters[L];
}

struct GroupSpec {
  int n;
  int l;
  int occ;
};

std::vector<GroupSpec> parse_config_string(const std::string& s,
                                           const std::string& label) {
  std::vector<GroupSpec> groups;
  size_t i = 0;
  while (i < s.size()) {
    if (s[i] == '_') {
      ++i;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(s[i])))
      throw std::invalid_argument("state label '" + label +
                                  "': expected a principal quantum number at '" +
                                  s.substr(i) + "'");
    size_t j = i;
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
    const int n = std::stoi(s.substr(i, j - i));
    if (j == s.size())
      throw std::invalid_argument("state label '" + label +
                                  "': missing shell letter after '" +
                                  s.substr(i) + "'");
    const int l = letter_to_l(s[j]);
    if (l < 0)
      throw std::invalid_argument("state label '" + label +
                                  "': unknown shell letter '" +
                                  std::string(1, s[j]) + "'");
    ++j;
    // Digits after the letter are the occupancy unless they start the next
    // token (i.e. they are immediately followed by another shell letter).
    size_t k = j;
    while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
    int occ = 1;
    if (k > j && !(k < s.size() && std::isalpha(static_cast<unsigned char>(s[k])))) {
      occ = std::stoi(s.substr(j, k - j));
      j = k;
    }
    if (n < l + 1)
      throw std::invalid_argument("state label '" + label + "': shell " +
                                  std::to_string(n) + std::string(1, s[j - 1]) +
                                  " violates n >= l+1");
    groups.push_back({n, l, occ});
    i = j;
  }
  if (groups.empty())
    throw std::invalid_argument("state label '" + label +
                                "': empty configuration string");
  return groups;
}

} // namespace

const char* to_string(Mode mode) {
  switch (mode) {
    case Mode::x_only: return "x_only";
    case Mode::xc_wigner: return "xc_wigner";
    case Mode::xc_lyp: return "xc_lyp";
  }
  return "?";
}

Mode mode_from_string(const std::string& name) {
  if (name == "x_only") return Mode::x_only;
  if (name == "xc_wigner") return Mode::xc_wigner;
  if (name == "xc_lyp") return Mode::xc_lyp;
  throw std::invalid_argument("unknown mode '" + name +
                              "' (expected x_only, xc_wigner, or xc_lyp)");
}

const char* to_string(DeterminantRole role) {
  switch (role) {
    case DeterminantRole::high_spin: return "high_spin";
    case DeterminantRole::ms0_average: return "ms0_average";
    case DeterminantRole::closed_shell: return "closed_shell";
  }
  return "?";
}

double Configuration::n_electrons() const {
  double n = 0.0;
  for (const auto& s : shells) n += s.occupancy;
  return n;
}

void Configuration::validate() const {
  if (!(Z > 0.0) || !std::isfinite(Z))
    throw std::invalid_argument("configuration: nuclear charge must be positive");
  if (shells.empty())
    throw std::invalid_argument("configuration: no occupied shells");
  for (const auto& s : shells) {
    if (s.n < 1 || s.l < 0 || s.n < s.l + 1)
      throw std::invalid_argument("configuration: invalid quantum numbers (n=" +
                                  std::to_string(s.n) + ", l=" +
                                  std::to_string(s.l) + ")");
    if (!(s.occupancy > 0.0) || s.occupancy > 2.0 * s.l + 1.0 + kOccEps)
      throw std::invalid_argument(
          "configuration: occupancy outside (0, 2l+1] for shell n=" +
          std::to_string(s.n) + ", l=" + std::to_string(s.l));
  }
  for (size_t a = 0; a < shells.size(); ++a)
    for (size_t b = 0; b < a; ++b)
      if (shells[a].n == shells[b].n && shells[a].l == shells[b].l &&
          shells[a].spin == shells[b].spin)
        throw std::invalid_argument("configuration: duplicate shell entry");

  size_t fractional = 0;
  for (const auto& s : shells)
    if (!is_integer_occ(s.occupancy)) ++fractional;
  switch (determinant_role) {
    case DeterminantRole::ms0_average:
      if (fractional != 4)
        throw std::invalid_argument(
            "configuration: ms0_average requires two open shells at half "
            "occupancy per spin");
      break;
    case DeterminantRole::closed_shell:
      for (const auto& s : shells) {
        const size_t partner =
            find(s.n, s.l, s.spin == Spin::up ? Spin::down : Spin::up);
        if (partner == npos ||
            std::abs(shells[partner].occupancy - s.occupancy) > kOccEps)
          throw std::invalid_argument(
              "configuration: closed_shell requires spin-paired occupancies");
      }
      break;
    case DeterminantRole::high_spin:
      if (fractional != 0)
        throw std::invalid_argument(
            "configuration: high_spin requires integer occupancies");
      break;
  }
}

namespace {

// For ms0_average: index of the open (fractional) shell's (n, l) group in
// first-appearance order, or -1 for a closed entry.
int open_group_index(const Configuration& c, size_t s) {
  if (is_integer_occ(c.shells[s].occupancy)) return -1;
  int group = 0;
  std::vector<std::pair<int, int>> seen;
  for (size_t t = 0; t <= s; ++t) {
    if (is_integer_occ(c.shells[t].occupancy)) continue;
    const std::pair<int, int> key{c.shells[t].n, c.shells[t].l};
    const auto it = std::find(seen.begin(), seen.end(), key);
    if (it == seen.end()) {
      group = static_cast<int>(seen.size());
      seen.push_back(key);
    } else {
      group = static_cast<int>(it - seen.begin());
    }
  }
  return group;
}

// Occupation of shell s in determinant d (0 or 1) of the ms0 ensemble.
double determinant_occ(const Configuration& c, size_t s, int d) {
  const int g = open_group_index(c, s);
  if (g < 0) return c.shells[s].occupancy;
  const bool up = c.shells[s].spin == Spin::up;
  const bool first_up = (d == 0);
  const bool occupied = (g == 0) ? (up == first_up) : (up != first_up);
  return occupied ? 1.0 : 0.0;
}

} // namespace

double Configuration::mean_occ(std::size_t s) const { return shells[s].occupancy; }

double Configuration::pair_occ(std::size_t s, std::size_t t) const {
  if (determinant_role != DeterminantRole::ms0_average)
    return shells[s].occupancy * shells[t].occupancy;
  double acc = 0.0;
  for (int d = 0; d < 2; ++d)
    acc += determinant_occ(*this, s, d) * determinant_occ(*this, t, d);
  return 0.5 * acc;
}

double Configuration::pair_occ_same(std::size_t s) const {
  if (determinant_role == DeterminantRole::ms0_average) {
    double acc = 0.0;
    for (int d = 0; d < 2; ++d) {
      const double q = determinant_occ(*this, s, d);
      acc += q * (q - 1.0);
    }
    return 0.5 * acc;
  }
  const double q = shells[s].occupancy;
  return q * (q - 1.0);
}

std::size_t Configuration::find(int n, int l, Spin spin) const {
  for (size_t s = 0; s < shells.size(); ++s)
    if (shells[s].n == n && shells[s].l == l && shells[s].spin == spin) return s;
  return npos;
}

Configuration configuration_from_label(double Z, const std::string& label) {
  const size_t cut = label.find_last_of('_');
  if (cut == std::string::npos || cut == 0 || cut + 1 >= label.size())
    throw std::invalid_argument("state label '" + label +
                                "': expected '<config>_<term>'");
  const std::string config_str = label.substr(0, cut);
  const std::string term = label.substr(cut + 1);

  size_t ti = 0;
  while (ti < term.size() && std::isdigit(static_cast<unsigned char>(term[ti]))) ++ti;
  if (ti == 0 || ti + 1 != term.size())
    throw std::invalid_argument("state label '" + label + "': malformed term '" +
                                term + "'");
  const int multiplicity = std::stoi(term.substr(0, ti));
  const char term_letter = term.back();

  const std::vector<GroupSpec> groups = parse_config_string(config_str, label);

  int unpaired = 0;
  int L_total = 0;
  for (const auto& g : groups) {
    const int capacity = 2 * (2 * g.l + 1);
    if (g.occ > capacity)
      throw std::invalid_argument("state label '" + label + "': shell holds " +
                                  std::to_string(g.occ) + " > " +
                                  std::to_string(capacity) + " electrons");
    if (g.occ < capacity) {
      if (g.occ != 1)
        throw std::invalid_argument("state label '" + label +
                                    "': only singly-occupied open shells are "
                                    "supported");
      unpaired += 1;
      L_total += g.l;
    }
  }
  const char expected_letter = l_to_term_letter(L_total);
  if (term_letter != expected_letter)
    throw std::invalid_argument("state label '" + label + "': term letter '" +
                                std::string(1, term_letter) +
                                "' inconsistent with configuration (expected '" +
                                std::string(1, expected_letter) + "')");

  Configuration c;
  c.Z = Z;
  c.term_label = label;
  if (unpaired == 0) {
    if (multiplicity != 1)
      throw std::invalid_argument("state label '" + label +
                                  "': closed configuration must be a singlet");
    c.determinant_role = DeterminantRole::closed_shell;
    for (const auto& g : groups) {
      c.shells.push_back({g.n, g.l, Spin::up, g.occ / 2.0});
      c.shells.push_back({g.n, g.l, Spin::down, g.occ / 2.0});
    }
  } else if (multiplicity == unpaired + 1) {
    c.determinant_role = DeterminantRole::high_spin;
    for (const auto& g : groups) {
      const int capacity = 2 * (2 * g.l + 1);
      if (g.occ == capacity) {
        c.shells.push_back({g.n, g.l, Spin::up, g.occ / 2.0});
        c.shells.push_back({g.n, g.l, Spin::down, g.occ / 2.0});
      } else {
        c.shells.push_back({g.n, g.l, Spin::up, 1.0});
      }
    }
  } else if (multiplicity == 1 && unpaired == 2) {
    c.determinant_role = DeterminantRole::ms0_average;
    for (const auto& g : groups) {
      const int capacity = 2 * (2 * g.l + 1);
      if (g.occ == capacity) {
        c.shells.push_back({g.n, g.l, Spin::up, g.occ / 2.0});
        c.shells.push_back({g.n, g.l, Spin::down, g.occ / 2.0});
      } else {
        c.shells.push_back({g.n, g.l, Spin::up, 0.5});
        c.shells.push_back({g.n, g.l, Spin::down, 0.5});
      }
    }
  } else {
    throw std::invalid_argument("state label '" + label + "': multiplicity " +
                                std::to_string(multiplicity) +
                                " inconsistent with " +
                                std::to_string(unpaired) + " unpaired electrons");
  }
  c.validate();
  return c;
}

} // namespace boxatom
