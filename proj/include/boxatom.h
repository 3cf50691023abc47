/* boxatom: Kohn-Sham solver for atoms confined in an impenetrable sphere.
 *
 * C interface to the solver core. All functions are thread-compatible:
 * distinct solutions may be created and queried concurrently, and a single
 * solution handle may be read from several threads at once.
 *
 * Every fallible call returns a boxatom_status; out-parameters are written
 * only on BOXATOM_OK. boxatom_solve additionally reports a human-readable
 * reason through the caller-provided error buffer (always NUL-terminated,
 * truncated if needed; pass NULL/0 to skip it).
 */
#ifndef BOXATOM_H
#define BOXATOM_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum boxatom_status {
  BOXATOM_OK = 0,
  BOXATOM_INVALID_ARGUMENT = 1, /* unusable label, mode, radius, or index */
  BOXATOM_NOT_CONVERGED = 2,    /* the SCF loop exhausted its budget */
  BOXATOM_INTERNAL_ERROR = 3    /* anything else (I/O, solver failure) */
} boxatom_status;

/* Opaque handle to one solved confined-atom state. */
typedef struct boxatom_solution boxatom_solution;

/* Library version as "major.minor.patch" (static storage). */
const char* boxatom_version(void);

/* Solve the state a label names, self-consistently.
 *
 *   Z       nuclear charge (Z > 0)
 *   label   state label: configuration + term, e.g. "1s2_1S", "1s2s_3S",
 *           "1s2p_1P", "1s2_2s_2S", "1s2_2s2_1S"
 *   mode    "x_only", "xc_wigner", or "xc_lyp"
 *   r_c     confining radius in bohr (> 0.05); values >= 40 behave as the
 *           free atom, and +inf is accepted as an alias for that box
 *   n_r     interior radial collocation points; 0 selects the default (300)
 *
 * Open-shell singlet labels are resolved through the diagonal sum rule:
 * reported energies are term energies (two SCF runs), and the stored state
 * is the solved M_S = 0 ensemble, whose density the profile queries use.
 *
 * On BOXATOM_OK, *out owns the solution and must be released with
 * boxatom_free. On failure *out is untouched and errbuf (if given) holds
 * the reason.
 */
boxatom_status boxatom_solve(double Z, const char* label, const char* mode,
                             double r_c, int n_r, boxatom_solution** out,
                             char* errbuf, size_t errbuf_len);

/* Release a solution handle (NULL is a no-op). */
void boxatom_free(boxatom_solution* solution);

/* Scalar energy components, hartree. Component names:
 *   "E_total"        total energy
 *   "T"              kinetic energy
 *   "V_en"           electron-nucleus attraction
 *   "E_H"            classical Coulomb (Hartree) energy
 *   "E_x"            exchange energy
 *   "E_c"            correlation energy (0 in x_only mode)
 *   "V_ee"           E_H + E_x + E_c
 *   "eigenvalue_sum" occupancy-weighted orbital-energy sum
 */
boxatom_status boxatom_energy(const boxatom_solution* solution,
                              const char* component, double* out);

/* SCF iterations spent (both runs for a diagonal-sum-rule singlet),
 * or -1 for a NULL handle. */
int boxatom_iterations(const boxatom_solution* solution);

/* Density moment m_k = integral rho(r) r^k d3r over the solved ensemble
 * density (k >= -2; divergent below). m_0 recovers the electron count. */
boxatom_status boxatom_moment(const boxatom_solution* solution, int k,
                              double* out);

/* Radial distribution D(r) = 4 pi r^2 rho(r) sampled on n_samples uniform
 * radii spanning [0, r_c]. Fills r[0..n_samples) and d[0..n_samples);
 * n_samples must be at least 2. */
boxatom_status boxatom_density_profile(const boxatom_solution* solution,
                                       int n_samples, double* r, double* d);

/* Potential profile sampled like boxatom_density_profile. Names:
 *   "v_H"                        classical Coulomb potential
 *   "v_x_up"   / "v_x_down"      exchange potential per spin
 *   "v_c_up"   / "v_c_down"      correlation potential per spin
 * (The bare nuclear -Z/r and the confining wall are analytic and omitted.)
 */
boxatom_status boxatom_potential_profile(const boxatom_solution* solution,
                                         const char* name, int n_samples,
                                         double* r, double* v);

/* Per-shell distribution u^2(r) for shell `index` (occupancy not applied),
 * sampled like boxatom_density_profile. */
boxatom_status boxatom_orbital_profile(const boxatom_solution* solution,
                                       int index, int n_samples, double* r,
                                       double* d);

/* Number of occupied shells, or -1 for a NULL handle. */
int boxatom_orbital_count(const boxatom_solution* solution);

/* Quantum numbers, occupancy, spin (+1 up / -1 down), and orbital energy
 * (hartree) of shell `index` (0-based). Any out-pointer may be NULL. */
boxatom_status boxatom_orbital(const boxatom_solution* solution, int index,
                               int* n, int* l, int* spin, double* occupancy,
                               double* eigenvalue);

/* ------------------------------------------------------------------ jobs
 *
 * Scan orchestration over an INI job file of the form
 *
 *   [system]            [grid]          [run]
 *   Z = 2               n_r = 300       mode = xc_wigner
 *   N = 2               L = 1.0         rc = 0.5, 1, 2, inf
 *   term = 1s2_1S                       out = results/
 *                                       reference = ref.csv
 *                                       tolerance = 2e-3
 *
 * Each radius is solved and written as <term>_<mode>_rc<token>.csv in the
 * output directory, together with scan_summary.csv, comparison.csv (when a
 * reference table is configured), and a timestamped scan.log. Output bytes
 * outside the log are deterministic.
 */

/* Run a job file. out_dir (when non-NULL) overrides the config's output
 * directory, jobs > 1 dispatches radii onto that many threads, and
 * tolerance > 0 overrides every grading gate. On BOXATOM_OK, *verdict is
 *   0  every graded row passed (or nothing was graded),
 *   2  at least one graded row missed its tolerance,
 *   1  at least one radius failed to solve.
 * Unreadable or malformed inputs are reported through the return status
 * and errbuf instead. */
boxatom_status boxatom_run_config(const char* config_path, const char* out_dir,
                                  int jobs, double tolerance, int* verdict,
                                  char* errbuf, size_t errbuf_len);

/* Grade a previously written scan_summary.csv against a reference table.
 * tolerance > 0 overrides per-row gates. On BOXATOM_OK, *verdict is as for
 * boxatom_run_config, and *report_csv (when report_csv is non-NULL)
 * receives the comparison table, to be released with boxatom_text_free. */
boxatom_status boxatom_compare_files(const char* computed_csv,
                                     const char* reference_csv,
                                     double tolerance, int* verdict,
                                     char** report_csv, char* errbuf,
                                     size_t errbuf_len);

/* Release a string returned through an out-parameter (NULL is a no-op). */
void boxatom_text_free(char* text);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* BOXATOM_H */
