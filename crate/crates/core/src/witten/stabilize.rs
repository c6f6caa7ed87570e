//! Quasi-isomorphism invariance data: enlarge an instance by an acyclic
//! identity block and transport the form along the projection.

use crate::error::Result;
use crate::koszul::TwoTermComplex;
use crate::linalg::{rat, RMatrix};
use crate::witten::form::{Form, Instance};

/// An enlarged instance together with the projection back onto the original
/// complex (a quasi-isomorphism).
#[derive(Clone, Debug)]
pub struct Stabilization {
    pub instance: Instance,
    /// `f0 x (f0 + s)` projection on the degree-0 part.
    pub projection0: RMatrix,
    /// `f1 x (f1 + s)` projection on the degree-1 part.
    pub projection1: RMatrix,
}

/// `F (+) (Q^s -> Q^s)` with the identity on the new block; the form is the
/// original table viewed inside the enlarged complex, so its pushforward
/// along the projection is the original form.
pub fn stabilize(inst: &Instance, s: usize) -> Result<Stabilization> {
    let f = inst.complex();
    let (f1, f0) = (f.rank1(), f.rank0());
    let mut triplets = Vec::new();
    for r in 0..f0 {
        for (c, v) in f.d().row(r) {
            triplets.push((r, *c, v.clone()));
        }
    }
    for j in 0..s {
        triplets.push((f0 + j, f1 + j, rat(1)));
    }
    let enlarged = TwoTermComplex::new(f1 + s, f0 + s, RMatrix::from_triplets(f0 + s, f1 + s, triplets))?;

    let entries = inst.form().coeffs().map(|(e, t, c)| {
        let mut exponents = e.clone();
        exponents.extend(std::iter::repeat(0).take(s));
        (exponents, t, c.clone())
    });
    let form = Form::new(inst.m(), f0 + s, f1 + s, entries)?;
    let instance = Instance::new(enlarged, form)?;

    let projection0 = RMatrix::from_triplets(f0, f0 + s, (0..f0).map(|i| (i, i, rat(1))));
    let projection1 = RMatrix::from_triplets(f1, f1 + s, (0..f1).map(|i| (i, i, rat(1))));
    Ok(Stabilization {
        instance,
        projection0,
        projection1,
    })
}
