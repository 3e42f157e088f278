#ifndef SKG_CONFIG_HPP
#define SKG_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "skg/common.hpp"
#include "skg/flow.hpp"
#include "skg/renorm.hpp"

namespace skg {

enum class RunKind { renorm_scan, classical_run, dress_check, quantum_correspond, verify_all };

RunKind kind_from_string(const std::string& s);
std::string to_string(RunKind k);

// Full experiment configuration. JSON schema (all keys optional except kind):
//   kind            "renorm_scan" | "classical_run" | "dress_check" |
//                   "quantum_correspond" | "verify_all"
//   grid            {dim, n, L}
//   modes           {n_nuc, meson_nodes: [flat indices], basis: "harmonic"|"plane_waves"}
//   potential       {kind: "zero"|"harmonic", omega_trap}
//   physics         {M, m0, sigma0, d}
//   sigma_list      [sigma, ...]                     (renorm_scan)
//   flow            {dt, t_final, integrator: "strang"|"rk4", energy_jump_tol, coupling}
//   classical       {dressed_energy, conj_residual, max_rows}
//   dress           {n_states}
//   quantum         {z0: [[re,im],..], xi: [[re,im],..], t_grid, eps_list,
//                    n_max, K, coupling_on, cap_tol}
//   output          {dir, plots}
//   seed            unsigned integer
//   threads         >= 1
struct RunConfig {
    RunKind kind = RunKind::verify_all;

    int dim = 1;
    int n = 64;
    double L = 8.0;

    int n_nuc = 1;
    std::vector<std::size_t> meson_nodes = {13, 16, 19};
    std::string mode_basis = "harmonic";

    std::string potential = "harmonic";
    double omega_trap = 1.0;

    // d defaults to 3 for renorm_scan and to the grid dim otherwise; sigma0
    // defaults to 4 for quantum_correspond (live sector bound) and 1 elsewhere
    RenormParams renorm;
    dvec sigma_list;      // default: 16 log-spaced points on [10^1, 10^4]

    FlowConfig flow;
    bool dressed_energy = true;
    bool conj_residual = true;
    int max_rows = 200;  // row cadence cap for the classical CSV

    int dress_states = 20;

    cvec z0, xi;  // empty = filled per mode count at run time
    dvec t_grid = {0.2, 0.5};
    dvec eps_list = {0.4, 0.2, 0.1};
    int n_max = 14;
    double K = 1.0;
    bool coupling_on = true;
    double cap_tol = 1e-3;

    std::string out_dir = "out";
    bool plots = true;
    std::uint64_t seed = 1;
    int threads = 1;
};

// Parse and validate; unknown keys rejected, every error names the field path.
RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text);

// Canonical full serialization; parse(serialize(c)) reproduces c exactly.
std::string serialize_config(const RunConfig& cfg);

}  // namespace skg

#endif
