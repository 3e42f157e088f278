#ifndef SKG_FLOW_HPP
#define SKG_FLOW_HPP

#include <functional>
#include <vector>

#include "skg/fields.hpp"
#include "skg/polysym.hpp"
#include "skg/renorm.hpp"

namespace skg {

struct FlowConfig {
    double dt = 1e-3;
    double t_final = 1.0;
    enum class Integrator { strang, rk4 } integrator = Integrator::strang;
    // single-step relative energy jump beyond this aborts with NumericError
    double energy_jump_tol = 1e-3;
    // scales the Yukawa interaction; 0 gives the decoupled control runs
    double coupling = 1.0;

    void validate() const;
    int steps() const;
};

struct StepRecord {
    double t, mass, energy;
};

struct Trajectory {
    std::vector<StepRecord> records;  // one entry per step, including t = 0
    ClassicalState state;
};

using StepObserver = std::function<void(int step, double t, const ClassicalState&)>;

// exact free flow: mode-wise phases e^{-it(-Lap/2M+V)} u, e^{-it omega} alpha;
// harmonic V is diagonalized per axis in the discrete oscillator basis
ClassicalState free_flow(const ClassicalState& z, double t, const ExternalPotential& V,
                         const RenormParams& p);

// Strang split-step for eq. 72: half-step exact linear flow, exact coupled
// kick (|u|^2 frozen, midpoint A), half-step linear
Trajectory evolve_yukawa(const ClassicalState& z, const FlowConfig& cfg,
                         const ExternalPotential& V, const RenormParams& p,
                         const StepObserver& obs = {});

enum class DressedMethod { conjugation, galerkin };

// eq. 69 dressed flow D(-1) E(t) D(1), or the Galerkin ODE on a mode set;
// records carry the dressed energy
Trajectory evolve_dressed(const ClassicalState& z, const FlowConfig& cfg,
                          const ExternalPotential& V, const RenormParams& p, DressedMethod method,
                          const ModeSet* modes = nullptr, const StepObserver& obs = {});

// classic RK4 on zdot = -i gradient_zbar(sym, z)
cvec galerkin_flow(const PolySymbol& sym, cvec z0, const FlowConfig& cfg);

// || E_dt(t) z - D(1) Ehat_ref(t) D(-1) z || with the dt/8 conjugation flow
// as the dressed reference; vanishes at second order in dt
double conjugation_residual(const ClassicalState& z, double t, const FlowConfig& cfg,
                            const ExternalPotential& V, const RenormParams& p);

}  // namespace skg

#endif
