//! Exact integral lattice arithmetic: Smith normal forms, discriminant groups and
//! their quadratic forms, small isometry groups, and the double coset machinery
//! used to count Fourier–Mukai partners of K3 and abelian surfaces.
//!
//! ```
//! use fmlat::{discriminant_group, parse_lattice_expr};
//!
//! let l = parse_lattice_expr("U(3)").unwrap();
//! assert_eq!(discriminant_group(&l).unwrap().cyclic_orders, vec![3, 3]);
//! ```

pub mod counting;
pub mod discriminant;
pub mod error;
pub mod fqf;
pub mod isometry;
pub mod lattice;
pub mod matrix;
pub mod parse;
pub mod rational;
pub mod scenario;
pub mod smith;

pub use counting::{
    direct_double_coset_count, double_coset_count, euler_phi, fm_count, fm_count_abelian, fm_count_k3,
    fqf_double_coset_count, nikulin_check, totient_order_bound, twisted_partner_check, Citation,
    DoubleCosetCount, FmCountReport, GHodgeSpec, LatticeSummary, NikulinReport, SurfaceKind,
    TwistedPartnerReport,
};
pub use discriminant::{
    discriminant_bilinear, discriminant_form, discriminant_group, p_analysis, DiscriminantGroup, PAnalysis,
};
pub use error::{Error, Result};
pub use fqf::{
    fqf_automorphisms, fqf_isometric, fqf_standard, gauss_milgram_signature, has_u2_or_v2_component,
    order_d_element_count, FiniteQuadraticForm, FqfAutomorphismGroup,
};
pub use isometry::{
    binary_equivalence, binary_genus_scan, induced_on_discriminant, is_surjective_on_discriminant,
    lattice_isometries, GenusScan, IsometrySet, Surjectivity, SurjectivityReport,
};
pub use lattice::{
    has_hyperbolic_summand, is_primitive_sublattice, orthogonal_complement, BasicInvariants, HyperbolicSummand,
    Lattice, Signature, SublatticeSpec,
};
pub use matrix::{BigIntMatrix, IntMatrix};
pub use parse::parse_lattice_expr;
pub use rational::Rational;
pub use scenario::{run_batch, run_scenario, ManifestEntry, ScenarioReport};
pub use smith::{smith_normal_form, SmithDecomposition};
