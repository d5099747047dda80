use std::f64::consts::PI;

use super::{closed_form, closed_form_modes, mfs_solve, EigenField, MfsConfig};
use crate::error::{Error, Result};
use crate::geometry::{Domain, DomainSpec};
use crate::sampling;
use crate::specfun::bessel_root;

/// Which representation `solve` should use.
#[derive(Debug, Clone, PartialEq)]
pub enum SolverChoice {
    /// Closed form when one exists for the requested index, MFS otherwise.
    Auto,
    ClosedForm,
    Mfs(MfsConfig),
}

/// Charge layout suited to `spec`: graded placement for flowers, uniform otherwise.
pub fn default_mfs_config(spec: &DomainSpec) -> MfsConfig {
    match spec {
        DomainSpec::Flower { .. } => MfsConfig::flower(),
        _ => MfsConfig::default(),
    }
}

/// Radius of a disk contained in the domain, from the best lattice point.
pub fn inscribed_radius(domain: &Domain) -> f64 {
    sampling::lattice(domain, 0.02, 0.0, None)
        .into_iter()
        .map(|p| domain.clearance(p))
        .fold(0.0, f64::max)
}

/// `[lo, hi]` containing the first `k` Dirichlet eigenvalues: the Faber–Krahn
/// value below `λ₁`, and the `k`-th disk eigenvalue of an inscribed disk above `λ_k`.
pub fn eigenvalue_window(domain: &Domain, k: u32) -> Result<(f64, f64)> {
    let j01 = bessel_root(0, 1);
    let lo = PI * j01 * j01 / domain.area();
    let rho = inscribed_radius(domain);
    if !(rho > 0.0) {
        return Err(Error::Degenerate("no interior lattice point".into()));
    }
    let disk = closed_form_modes(&DomainSpec::UnitDisk, k as usize)?;
    let hi = disk[k as usize - 1].eigenvalue() / (rho * rho);
    Ok((0.999 * lo, hi + 0.1))
}

/// Whether mode `k` of `spec` has a closed form.
pub fn has_closed_form(spec: &DomainSpec, k: u32) -> bool {
    match spec {
        DomainSpec::UnitSquare | DomainSpec::UnitDisk => true,
        DomainSpec::Annulus { .. } => k == 1,
        _ => false,
    }
}

/// The `k`-th Dirichlet eigenfield (`k ≥ 1`, counted with multiplicity).
pub fn solve(spec: &DomainSpec, k: u32, choice: &SolverChoice) -> Result<EigenField> {
    if k == 0 {
        return Err(Error::Parameter("eigen index starts at 1".into()));
    }
    let cfg = match choice {
        SolverChoice::Auto if has_closed_form(spec, k) => return closed_form(spec, k),
        SolverChoice::ClosedForm => {
            if !has_closed_form(spec, k) {
                return Err(Error::Unsupported(format!(
                    "no closed form for mode {k} of {}",
                    spec.label()
                )));
            }
            return closed_form(spec, k);
        }
        SolverChoice::Auto => default_mfs_config(spec),
        SolverChoice::Mfs(cfg) => cfg.clone(),
    };
    let domain = Domain::new(spec.clone())?;
    let window = eigenvalue_window(&domain, k)?;
    let cfg = MfsConfig {
        max_count: Some(k as usize),
        first_index: 1,
        ..cfg
    };
    let sols = mfs_solve(spec, window, &cfg)?;
    sols.into_iter()
        .find(|s| s.field.index() == k)
        .map(|s| s.field)
        .ok_or_else(|| {
            Error::NoEigenvalue(format!(
                "fewer than {k} eigenvalues found in [{:.4}, {:.4}] for {}",
                window.0,
                window.1,
                spec.label()
            ))
        })
}

