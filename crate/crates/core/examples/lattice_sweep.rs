//! Weighted sup of fractional Fourier transforms over a lattice of orders.

use num_complex::Complex64;
use pilipovic::hermite::{CoeffTensor, TruncationBox};
use pilipovic::spaces::{lattice_sweep, write_lattice_csv, Lattice, SpaceIndex, WeightFamily, WeightSpec};

fn main() -> pilipovic::Result<()> {
    let c = CoeffTensor::from_fn(TruncationBox::cube(96, 1)?, |a| Complex64::new((-2.0 * a[0] as f64).exp(), 0.0));
    let lat = Lattice::uniform(0.0, 0.5, 1)?;
    for r in [0.25, 0.5, 1.0] {
        let w = WeightSpec::new(WeightFamily::OmegaD, SpaceIndex::Real(0.5), r, 1)?;
        let sweep = lattice_sweep(&c, &lat, &w)?;
        println!("r = {r}: sup over {} nodes = {:.6e}", sweep.nodes.len(), sweep.sup.unwrap_or(f64::INFINITY));
    }

    let h = CoeffTensor::unit(TruncationBox::cube(8, 2)?, &[2, 1])?;
    let w = WeightSpec::new(WeightFamily::OmegaD, SpaceIndex::Real(0.25), 1.0, 2)?;
    let table = lattice_sweep(&h, &Lattice::uniform(0.0, 0.5, 2)?, &w)?;
    write_lattice_csv(&table, std::io::stdout().lock())?;
    Ok(())
}
