//! Single grid-point evaluation shared by `compute` (strict: precondition
//! violations become errors) and `sweep` (lenient: degenerate or
//! non-orthogonal points yield null cells).

use varbound::bounds::{self, BoundPairSet};
use varbound::error::Error;
use varbound::hilbert::{self, PureState};
use varbound::systems::ExampleSystem;

use crate::config::BaselineFlags;
use crate::row::{FamilyCols, Row};

/// Orthogonality acceptance threshold for the companion state.
const ORTHO_TOL: f64 = 1e-10;

fn cells(set: &BoundPairSet) -> FamilyCols {
    FamilyCols {
        lower_plus: Some(set.lower_plus),
        lower_minus: Some(set.lower_minus),
        upper_plus: Some(set.upper_plus),
        upper_minus: Some(set.upper_minus),
    }
}

/// In lenient mode, precondition failures become `None`; anything else is a
/// genuine error either way.
fn tolerate<T>(result: Result<T, Error>, strict: bool) -> Result<Option<T>, Error> {
    match result {
        Ok(v) => Ok(Some(v)),
        Err(e @ (Error::DegenerateVariance { .. } | Error::NotOrthogonal { .. })) => {
            if strict {
                Err(e)
            } else {
                Ok(None)
            }
        }
        Err(Error::SingularDenominator) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Evaluates every requested bound at one (theta, phi).
pub fn evaluate_point(
    system: &ExampleSystem,
    theta: f64,
    phi: f64,
    families: &[u8],
    baselines: &BaselineFlags,
    orthogonalize: bool,
    strict: bool,
) -> Result<Row, Error> {
    let (psi, printed_perp) = system.state_pair(theta, phi);
    let overlap = hilbert::orthogonality_check(&psi, &printed_perp)?;
    let m = hilbert::moments(&system.a, &system.b, &psi)?;

    let needs_perp =
        families.contains(&2) || families.contains(&4) || baselines.maccone_pati;
    let perp: Option<PureState> = if orthogonalize {
        match hilbert::gram_schmidt_orthogonalize(&printed_perp, &psi) {
            Ok(repaired) => Some(repaired),
            Err(e) => {
                if strict {
                    return Err(e);
                }
                None
            }
        }
    } else if overlap <= ORTHO_TOL {
        Some(printed_perp)
    } else {
        if strict && needs_perp {
            return Err(Error::NotOrthogonal { overlap });
        }
        None
    };

    let mut row = Row {
        theta,
        phi,
        var_a: m.var_a,
        var_b: m.var_b,
        sum: m.var_a + m.var_b,
        ortho_overlap: overlap,
        ..Row::default()
    };

    let (a, b) = (&system.a, &system.b);
    let mut sets: Vec<BoundPairSet> = Vec::new();
    for &f in families {
        let result = match (f, &perp) {
            (1, _) => Some(bounds::family1(a, b, &psi)),
            (3, _) => Some(bounds::family3(a, b, &psi)),
            (2, Some(p)) => Some(bounds::family2(a, b, &psi, p)),
            (4, Some(p)) => Some(bounds::family4(a, b, &psi, p)),
            _ => None,
        };
        if let Some(result) = result {
            if let Some(set) = tolerate(result, strict)? {
                row.families.insert(f, cells(&set));
                sets.push(set);
            }
        }
    }
    if !sets.is_empty() {
        let comb = bounds::combined(&sets)?;
        row.combined_lower = Some(comb.lower);
        row.combined_upper = Some(comb.upper);
        row.combined_lower_source = Some(comb.lower_source.to_string());
        row.combined_upper_source = Some(comb.upper_source.to_string());
    }

    if baselines.robertson {
        row.robertson = Some(bounds::robertson(a, b, &psi)?);
    }
    if baselines.schrodinger {
        row.schrodinger = Some(bounds::schrodinger(a, b, &psi)?);
    }
    if baselines.maccone_pati {
        if let Some(p) = &perp {
            if let Some((mp_plus, mp_minus)) = tolerate(bounds::maccone_pati(a, b, &psi, p), strict)? {
                row.mp_plus = Some(mp_plus);
                row.mp_minus = Some(mp_minus);
            }
        }
    }
    if baselines.reverse_cov {
        row.reverse_cov = tolerate(bounds::reverse_cov(a, b, &psi), strict)?;
    }
    Ok(row)
}
