#pragma once

#include "polariton2d/model.hpp"
#include "polariton2d/superoperator.hpp"

namespace p2d {

/// Noise power spectrum S_B(omega) of the dephasing bath, in eV.
/// For omega >= 0 it is (1 + n(omega)) J(omega); for omega < 0 it is
/// n(-omega) J(-omega), with n the Bose-Einstein occupation. The flat
/// zero-temperature bath therefore vanishes for omega < 0. At omega = 0
/// the Flat bath uses its omega >= 0 branch and the Debye bath the
/// analytic limit 2 gamma kT / delta, keeping the generator continuous
/// in the parameters.
double noise_power(const BathSpec& bath, double omega_ev);

/// Cavity photon loss, kappa * (a rho a^dag - {a^dag a, rho}/2), as a
/// generator in the Hamiltonian eigenbasis. kappa is an energy (eV).
Superoperator lindblad_loss(const HamiltonianSystem& sys, double kappa_ev);

/// Bloch-Redfield-Wangsness dephasing: one generator per emitter with the
/// coupling operator sigma^dag_i sigma_i and an independent identical bath,
/// summed. Built in the Hamiltonian eigenbasis, without the secular
/// approximation; Lamb shifts are dropped (only the real half-Fourier part
/// of the bath correlation enters).
Superoperator brw_dephasing(const HamiltonianSystem& sys, const BathSpec& bath);

/// Plain Lindblad dephasing on sigma^dag_i sigma_i with rate gamma (eV),
/// provided for side-by-side comparison with the BRW treatment.
Superoperator lindblad_dephasing(const HamiltonianSystem& sys, double gamma_ev);

/// The dephasing generator selected by `model`.
Superoperator dephasing(const HamiltonianSystem& sys, const BathSpec& bath, DephasingModel model);

} // namespace p2d
