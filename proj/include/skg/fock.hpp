#ifndef SKG_FOCK_HPP
#define SKG_FOCK_HPP

#include <cstdint>
#include <unordered_map>

#include "skg/flow.hpp"
#include "skg/polysym.hpp"

namespace skg {

// occupation basis truncated by per-mode caps and a total-quanta cap; the
// semiclassical parameter enters only through the ladder normalization
// sqrt(eps n) and the 1/eps exponents downstream
struct FockSpace {
    const ModeSet* modes = nullptr;
    std::vector<int> caps;
    int n_max = 0;
    double eps = 1.0;
    std::vector<std::uint64_t> basis;  // packed 8 bits per mode, sorted
    std::unordered_map<std::uint64_t, std::size_t> index;

    static FockSpace build(const ModeSet& ms, std::vector<int> caps, int n_max, double eps);

    std::size_t dim() const { return basis.size(); }
    int occ(std::size_t i, int mode) const {
        return static_cast<int>((basis[i] >> (8 * mode)) & 0xffu);
    }
    int total_quanta(std::size_t i) const;
    int nucleon_quanta(std::size_t i) const;
    // total cap reached or some mode at its own cap: the layer where the CCR
    // truncation bites
    bool at_boundary(std::size_t i) const;
};

// compressed sparse rows over the occupation basis
struct SparseOp {
    std::size_t n = 0;
    std::vector<std::size_t> row_ptr;  // n + 1
    std::vector<std::size_t> col;
    cvec val;

    void apply(const cd* x, cd* y) const;
    cvec apply(const cvec& x) const;
    SparseOp adjoint() const;
    cvec to_dense() const;  // row-major n*n
    double hermiticity_defect() const;
    double inf_norm() const;
    std::size_t nnz() const { return col.size(); }
};

SparseOp op_add(const SparseOp& a, const SparseOp& b, cd sb = 1.0);  // a + sb*b
SparseOp op_mul(const SparseOp& a, const SparseOp& b);

struct QuantumState {
    cvec amp;
    double norm() const;
};

SparseOp annihilator(const FockSpace& f, int mode);  // sqrt(eps n) lowering
SparseOp creator(const FockSpace& f, int mode);
SparseOp nucleon_number(const FockSpace& f);  // N1, diagonal eps * n_nuc

// normal-ordered quantization: every monomial c (a*)^mu (a)^nu
SparseOp wick(const FockSpace& f, const PolySymbol& sym);

// e^{i tau H} psi for Hermitian H, Lanczos with full reorthogonalization and
// substepping; dense eigensolver fallback below dimension 512
cvec expi_action(const SparseOp& h, double tau, const cvec& psi);

// eq. 104 order: nucleon factor to the left of the meson factor,
// W(xi) = e^{(i/sqrt2)(a*(xi_1)+a(xi_1))} e^{(i/sqrt2)(a*(xi_2)+a(xi_2))}
cvec apply_weyl(const FockSpace& f, const cvec& xi, const cvec& psi);

// exp((a*(z0) - a(z0))/eps) vacuum
QuantumState coherent_state(const FockSpace& f, const cvec& z0);

// eq. 55 sector bound
int sector_bound(double eps, double sigma0, double K);

struct Hamiltonians {
    SparseOp h_hat;  // wick of the dressed reduced energy, sectors > frak_n zeroed
    SparseOp t_inf;  // wick of the sigma = inf dressing generator
    int frak_n = 0;
};

Hamiltonians build_hamiltonians(const FockSpace& f, const ExternalPotential& V,
                                const RenormParams& p, double K, bool coupling_on = true);

// eq. 61 conjugated matrix e^{-iT/eps} H_hat e^{iT/eps}, dense, dim <= 512
cvec h_ren_dense(const FockSpace& f, const Hamiltonians& hs);

// e^{-i (t/eps) H} psi
cvec propagate(const FockSpace& f, const SparseOp& h, double t, const cvec& psi);
// undressed dynamics of eq. 82: e^{-iT/eps} e^{-i(t/eps) H_hat} e^{iT/eps} psi
cvec propagate_ren(const FockSpace& f, const Hamiltonians& hs, double t, const cvec& psi);

struct CorrespondenceConfig {
    cvec z0;  // coherent center, mode coordinates
    cvec xi;  // Weyl test vector
    dvec t_grid;
    dvec eps_list;
    int n_max = 14;  // total cap; per-mode caps equal it
    double K = 1.0;
    bool coupling_on = true;
    FlowConfig classical;  // galerkin reference settings
};

struct CorrespondRow {
    double eps = 0.0, t = 0.0;
    cd Q, C;
    double err = 0.0;
    std::size_t basis_dim = 0;
    double cap_violation = 0.0;  // evolved-state mass on the cap boundary
};

// quantum characteristic function against the classical pushforward value for
// each (eps, t)
std::vector<CorrespondRow> correspondence_experiment(const ModeSet& ms,
                                                     const ExternalPotential& V,
                                                     const RenormParams& p,
                                                     const CorrespondenceConfig& cfg);

}  // namespace skg

#endif
