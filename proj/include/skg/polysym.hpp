#ifndef SKG_POLYSYM_HPP
#define SKG_POLYSYM_HPP

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "skg/fields.hpp"
#include "skg/grid.hpp"
#include "skg/renorm.hpp"

namespace skg {

// Finite mode set: n_nuc orthonormal nucleon grid functions followed by n_mes
// meson k-nodes. A symbol variable index j < n_nuc is a nucleon amplitude,
// j >= n_nuc the meson amplitude z_m with alpha(k_m) = z_m / sqrt(h_k).
struct ModeSet {
    const Grid* grid = nullptr;
    std::vector<cvec> phi;              // nucleon modes, <phi_i, phi_j>_x = delta_ij
    std::vector<double> e_nuc;          // per-mode free energies
    std::vector<std::size_t> knodes;    // meson mode flat grid indices
    std::vector<double> omega;          // omega(k_m)

    int n_nuc() const { return static_cast<int>(phi.size()); }
    int n_mes() const { return static_cast<int>(knodes.size()); }
    int n_total() const { return n_nuc() + n_mes(); }
    // max |<phi_i, phi_j> - delta_ij|
    double orthonormality_defect() const;

    // lowest-|k| plane waves (ties broken by flat index); exact eigenmodes of
    // the V = 0 free symbol, e_nuc = k^2/2M
    static ModeSet plane_waves(const Grid& g, int n_nuc, std::vector<std::size_t> knodes,
                               const RenormParams& p);
    // eigenvectors of the discrete -Lap/2M + w^2 x^2/2 (d = 1 only), so the
    // free symbol stays diagonal with e_nuc the discrete eigenvalues
    static ModeSet harmonic(const Grid& g, int n_nuc, double w_trap,
                            std::vector<std::size_t> knodes, const RenormParams& p);
};

inline constexpr int kMaxModes = 8;

// One monomial c * prod conj(z)^mu * prod z^nu.
struct Mono {
    std::array<std::uint8_t, kMaxModes> mu{};
    std::array<std::uint8_t, kMaxModes> nu{};
    cd c = 0.0;
};

// Polynomial symbol in (conj(z), z); canon() keeps terms sorted and merged so
// (mu, nu) keys are unique.
class PolySymbol {
public:
    explicit PolySymbol(int nmodes);

    int nmodes() const { return nmodes_; }
    const std::vector<Mono>& terms() const { return terms_; }
    void add(const Mono& m);
    // monomial plus its conjugate partner (nu, mu, conj c)
    void add_real_pair(const Mono& m);
    void canon(double drop_tol = 0.0);
    // every (mu, nu, c) has the partner (nu, mu, conj c)
    bool is_real(double tol = 1e-12) const;
    std::pair<int, int> degree() const;  // (max |mu|, max |nu|)
    std::string to_json() const;         // [{"mu":[..],"nu":[..],"re":..,"im":..},..]

private:
    int nmodes_;
    std::vector<Mono> terms_;
};

cd evaluate(const PolySymbol& sym, const cvec& z);
cvec gradient_zbar(const PolySymbol& sym, const cvec& z);

enum class EnergyKind { free, yukawa, dressed, dressing_gen };

struct ReduceOptions {
    SigmaVal sigma = SigmaVal::inf();
    // eq. 50 cross term: false stores the one-sided u-bar D_x u coefficients
    // as written; true applies the integration-by-parts symmetrization (and
    // the matching k^2 q / 2M Yukawa smearing shift), same classical value,
    // O(eps)-different Wick quantization
    bool symmetrize_cross = false;
};

// Exact Galerkin reduction of the grid functionals onto the mode set:
// substituting u = sum z_i phi_i, alpha = sum z_m psi_m reproduces the fields
// module values on the nose. Throws ConfigError beyond kMaxModes.
PolySymbol reduce_energy(EnergyKind kind, const ModeSet& modes, const ExternalPotential& V,
                         const RenormParams& p, const ReduceOptions& opt = {});

ClassicalState state_from_modes(const ModeSet& modes, const cvec& z);

}  // namespace skg

#endif
