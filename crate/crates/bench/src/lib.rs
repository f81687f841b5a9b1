//! Inputs shared by the benchmarks.

use surfarith_core::bend::fixtures::lifted;
use surfarith_core::bend::{make_bending_element, BendingDatum, SurfaceRep};
use surfarith_core::numfield::rat::qf;

/// The genus-2 fixture lifted to dimension n with a non-geometric bending datum.
pub fn bent_fixture(n: usize) -> (SurfaceRep, BendingDatum) {
    let rep = lifted(n);
    let e = rep.field.clone();
    let mut mu = vec![e.one(); n];
    mu[0] = e.int(2);
    mu[n - 1] = e.rat(qf(1, 2));
    let datum = make_bending_element(&rep, &mu).expect("fixture multipliers are valid");
    (rep, datum)
}
