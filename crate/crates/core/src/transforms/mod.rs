//! Fractional Fourier transforms, the Gaussian-window STFT, the Bargmann transform and
//! powers of the harmonic oscillator.

mod fourier;
mod fractional;
mod stft;

pub use fourier::{fourier_grid, BOUNDARY_DECAY};
pub use fractional::{frac_ft, harmonic_apply, ln_harmonic_eigenvalue, quarter_turn, FracOrder};
pub use stft::{
    bargmann, bargmann_batch, rotate_phase_point, stft_batch, stft_gaussian, stft_gaussian_grid,
    stft_phase, stft_rotation_check, stft_via_bargmann, write_bargmann_csv, write_stft_csv,
    BargmannPoint, BargmannValue, PhasePoint,
};
pub(crate) use stft::ln_weighted_stft;
