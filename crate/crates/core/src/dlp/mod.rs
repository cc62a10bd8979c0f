//! Exact discrete logarithm over safe-prime groups, assuming `F_p` and
//! modular arithmetic as oracles.
//!
//! `x_q = g_q^{l_q}` splits into `l_q mod 2`, read classically from
//! `x_q^p = +-1`, and `l = l_q mod p`, the logarithm of `x_q^2` to base
//! `g_q^2` in the order-`p` subgroup, found by one exact amplitude
//! amplification followed by phase estimation against `D_x`.

pub mod arith;
mod circuits;
mod instance;
mod oracles;
mod solve;

pub use circuits::{
    build_a_prime, build_algorithm_a, build_phase_flag, build_pipeline, build_q1, build_q2,
    DlpLayout, FlagKind, TableMode,
};
pub use instance::{crt_combine, make_instance, reduce_input, ReducedInstance, SafePrimeInstance};
pub use oracles::{
    build_amplitude_split, build_arithmetic_oracle, build_fourier_oracle,
    build_modexp_table_oracle, dx_chain, ArithmeticKind,
};
pub use solve::{
    a_good_norm, a_prime_good_norm, chi_state, q1_fidelity, q1_target, run_pipeline, solve_dlp,
    DlpBranch, DlpOutcome, SolveMode,
};
