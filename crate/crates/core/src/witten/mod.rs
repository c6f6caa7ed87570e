//! Closed nondegenerate forms on a two-term complex, the bigraded double
//! complex they generate, its total complexes, and the K-theory Euler class.

mod euler;
mod form;
mod homotopy;
mod stabilize;
mod total;

pub use euler::{ke_class, ke_class_force, n0_bound, EulerClass, FormalTerm, PerIClass};
pub use form::{
    check_closed, cohomology_split, induced_system, is_nondegenerate, random_closed_form,
    ClosednessCheck, CohomologySplit, Form, Instance,
};
pub use homotopy::{
    d_compose_h, default_homotopy_window, exp_htilde_on_slice, htilde_matrix,
    random_homotopy_form, verify_homotopy_invariance, HomotopyForm, HomotopyReport,
};
pub use stabilize::{stabilize, Stabilization};
pub use total::{
    atilde_matrix, cohomology_of_total, dtilde_matrix, total_complex, Cell, TotalComplexSlice,
};
