//! The extended index set, its order, and the weight families.

use num_complex::Complex64;
use pilipovic::spaces::{
    default_candidates, parse_space_param, seq_weight, space_compare, weight_omega, weight_theta, SpaceIndex,
    SpaceParam, WeightFamily, WeightSpec,
};

fn main() -> pilipovic::Result<()> {
    let mut labels: Vec<SpaceParam> =
        ["1", "flat:2", "0.3", "beurling:0.5", "0.5", "flat:0.5", "0"].iter().map(|s| parse_space_param(s)).collect::<Result<_, _>>()?;
    labels.sort_by(space_compare);
    println!("sorted: {}", labels.iter().map(ToString::to_string).collect::<Vec<_>>().join(" < "));
    println!("default candidates: {:?}", default_candidates().iter().map(ToString::to_string).collect::<Vec<_>>());

    let z = [Complex64::new(2.0, 1.0)];
    for s in [SpaceIndex::Real(0.25), SpaceIndex::Flat(1.0), SpaceIndex::Real(0.5)] {
        let w = WeightSpec::new(WeightFamily::OmegaD, s, 1.0, 1)?;
        println!("omega_(1,1,{s})(2+i) = {:.6e}", weight_omega(&w, &z)?);
    }
    let th = WeightSpec::new(WeightFamily::Theta2d, SpaceIndex::Real(1.0), 0.5, 1)?;
    println!("theta_(0.5,1)(1, 2) = {:.6}", weight_theta(&th, &[1.0], &[2.0])?);
    for k in [0usize, 4, 16] {
        let sq = WeightSpec::new(WeightFamily::Seq, SpaceIndex::Real(0.5), 2.0, 1)?;
        println!("seq weight s=1/2, r=2 at alpha={k}: {:.6e}", seq_weight(&sq, &[k])?);
    }
    Ok(())
}
