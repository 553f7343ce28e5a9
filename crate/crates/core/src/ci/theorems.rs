//! CI certificates from star decompositions and generalized wreath
//! products. Each pipeline checks its hypotheses, then compares its
//! conclusion with Babai's criterion.

use std::collections::HashSet;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{AbelianGroup, Subgroup, DEFAULT_MAX_ORDER};
use crate::perm::{aut_partition, transitivity_module, DEFAULT_MAX_DEGREE};
use crate::schur::{detect_gwreath, detect_star, SchurPartition};

use super::{babai_ci_check, CiVerdict, Method};

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum TheoremOutcome {
    /// Hypotheses hold; the verdict is CI and agrees with Babai's criterion.
    Proved { verdict: Box<CiVerdict> },
    /// Some hypothesis fails; nothing is concluded.
    Refused { reason: String },
}

impl TheoremOutcome {
    pub fn is_proved(&self) -> bool {
        matches!(self, TheoremOutcome::Proved { .. })
    }

    fn refused(reason: impl Into<String>) -> Self {
        TheoremOutcome::Refused { reason: reason.into() }
    }
}

/// CI via a nontrivial star decomposition `𝔄 = 𝔄_K ⋆ 𝔄_L` with CI factors.
pub fn ci_via_star(p: &SchurPartition, k: &Subgroup, l: &Subgroup) -> Result<TheoremOutcome> {
    ci_via_star_with(p, k, l, None)
}

pub(crate) fn ci_via_star_with(
    p: &SchurPartition,
    k: &Subgroup,
    l: &Subgroup,
    babai: Option<&CiVerdict>,
) -> Result<TheoremOutcome> {
    if let Some(reason) = common_hypotheses(p)? {
        return Ok(TheoremOutcome::refused(reason));
    }
    let cert = match detect_star(p, k, l) {
        Ok(c) => c,
        Err(e) => return Ok(TheoremOutcome::refused(format!("no star decomposition: {e}"))),
    };
    if cert.trivial {
        return Ok(TheoremOutcome::refused("star decomposition is trivial"));
    }
    for (name, sub) in [("K", k), ("L", l)] {
        if !is_ci(&p.restriction(sub)?.partition)? {
            return Ok(TheoremOutcome::refused(format!("restriction to {name} is not CI")));
        }
    }
    conclude(p, Method::Star, babai)
}

/// CI via a nontrivial generalized wreath product with respect to `L ≤ U`,
/// given CI sections `𝔄_U`, `𝔄_{H/L}` and the automorphism equality
/// `Aut_{U/L}(𝔄_{U/L}) = Aut_U(𝔄_U)^{U/L} · Aut_{H/L}(𝔄_{H/L})^{U/L}`.
pub fn ci_via_gwreath(p: &SchurPartition, l: &Subgroup, u: &Subgroup) -> Result<TheoremOutcome> {
    ci_via_gwreath_with(p, l, u, None)
}

pub(crate) fn ci_via_gwreath_with(
    p: &SchurPartition,
    l: &Subgroup,
    u: &Subgroup,
    babai: Option<&CiVerdict>,
) -> Result<TheoremOutcome> {
    if let Some(reason) = common_hypotheses(p)? {
        return Ok(TheoremOutcome::refused(reason));
    }
    let found = detect_gwreath(p)
        .into_iter()
        .find(|c| c.first == *l && c.second == *u);
    match found {
        None => return Ok(TheoremOutcome::refused("not a generalized wreath product for (L, U)")),
        Some(c) if c.trivial => return Ok(TheoremOutcome::refused("generalized wreath product is trivial")),
        Some(_) => {}
    }
    if !is_ci(&p.restriction(u)?.partition)? {
        return Ok(TheoremOutcome::refused("restriction to U is not CI"));
    }
    if !is_ci(&p.quotient(l)?.partition)? {
        return Ok(TheoremOutcome::refused("quotient by L is not CI"));
    }
    if !section_automorphisms_factor(p, l, u)? {
        return Ok(TheoremOutcome::refused("automorphism equality on U/L fails"));
    }
    conclude(p, Method::Gwreath, babai)
}

fn common_hypotheses(p: &SchurPartition) -> Result<Option<String>> {
    if !p.group().is_e_group() {
        return Ok(Some(format!("{} has a non-elementary Sylow subgroup", p.group())));
    }
    let g = aut_partition(p, DEFAULT_MAX_DEGREE)?;
    if transitivity_module(&g, p.group())? != *p {
        return Ok(Some("not a transitivity module".into()));
    }
    Ok(None)
}

fn conclude(p: &SchurPartition, method: Method, babai: Option<&CiVerdict>) -> Result<TheoremOutcome> {
    let mut verdict = match babai {
        Some(v) => v.clone(),
        None => babai_ci_check(p)?,
    };
    if !verdict.is_ci() {
        return Err(Error::Contradiction(format!(
            "{method:?} hypotheses hold but Babai's criterion refuses {}",
            p.to_json()
        )));
    }
    verdict.method = method;
    Ok(TheoremOutcome::Proved {
        verdict: Box::new(verdict),
    })
}

pub(crate) fn is_ci(p: &SchurPartition) -> Result<bool> {
    if p.group().order() <= 2 {
        return Ok(true);
    }
    Ok(babai_ci_check(p)?.is_ci())
}

/// Group automorphisms fixing every basic set, as permutations of ranks.
pub(crate) fn cayley_automorphisms(p: &SchurPartition) -> Result<Vec<Vec<u32>>> {
    let group = p.group();
    if group.is_trivial() {
        return Ok(vec![vec![0]]);
    }
    let auts = group.automorphism_group(DEFAULT_MAX_ORDER.max(group.order()))?;
    Ok(auts
        .iter()
        .filter(|phi| p.is_fixed_by(phi))
        .map(|phi| phi.perm().to_vec())
        .collect())
}

/// Checks `Aut_{U/L}(𝔄_{U/L}) = Aut_U(𝔄_U)^{U/L} · Aut_{H/L}(𝔄_{H/L})^{U/L}`,
/// with every group acting on one fixed copy `W` of `U/L`.
pub(crate) fn section_automorphisms_factor(p: &SchurPartition, l: &Subgroup, u: &Subgroup) -> Result<bool> {
    let group = p.group();
    let res_u = p.restriction(u)?;
    let u_group: Arc<AbelianGroup> = res_u.partition.group().clone();
    // L inside the copy of U
    let mut back = vec![u32::MAX; group.order()];
    for (r, &x) in res_u.embedding.iter().enumerate() {
        back[x as usize] = r as u32;
    }
    let l_in_u = u_group.subgroup_from_members(&l.members().iter().map(|&x| back[x as usize]).collect::<Vec<_>>())?;
    let section = res_u.partition.quotient(&l_in_u)?;
    let w_order = section.partition.group().order();
    // U-copy rank → W rank
    let to_w = &section.projection;

    let lhs: HashSet<Vec<u32>> = cayley_automorphisms(&section.partition)?.into_iter().collect();

    let induced_from = |images: &[u32], domain: &[u32], proj: &dyn Fn(u32) -> u32| -> Vec<u32> {
        // images of W points: pick any preimage in `domain`
        let mut out = vec![u32::MAX; w_order];
        for &x in domain {
            out[proj(x) as usize] = proj(images[x as usize]);
        }
        out
    };

    let u_points: Vec<u32> = u_group.elements().collect();
    let from_u: HashSet<Vec<u32>> = cayley_automorphisms(&res_u.partition)?
        .iter()
        .map(|phi| induced_from(phi, &u_points, &|x| to_w[x as usize]))
        .collect();

    let quo = p.quotient(l)?;
    let z_to_w: Vec<u32> = {
        let mut m = vec![u32::MAX; quo.partition.group().order()];
        for (r, &x) in res_u.embedding.iter().enumerate() {
            m[quo.projection[x as usize] as usize] = to_w[r];
        }
        m
    };
    let uz_points: Vec<u32> = u.members().iter().map(|&x| quo.projection[x as usize]).collect();
    let from_quotient: HashSet<Vec<u32>> = cayley_automorphisms(&quo.partition)?
        .iter()
        .map(|psi| induced_from(psi, &uz_points, &|z| z_to_w[z as usize]))
        .collect();

    let mut product: HashSet<Vec<u32>> = HashSet::new();
    for a in &from_u {
        for b in &from_quotient {
            product.insert(a.iter().map(|&x| b[x as usize]).collect());
        }
    }
    Ok(product == lhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::make_group;

    #[test]
    fn star_on_discrete_z6() {
        let h = make_group(&[2, 3]).unwrap();
        let d = SchurPartition::discrete(&h);
        let k = h.q_part(2).unwrap();
        let l = h.q_part(3).unwrap();
        assert!(ci_via_star(&d, &k, &l).unwrap().is_proved());
        assert!(!ci_via_star(&d, &h.whole(), &l).unwrap().is_proved());
    }

    #[test]
    fn gwreath_on_z4() {
        let h = make_group(&[4]).unwrap();
        let w = SchurPartition::from_blocks(&h, vec![vec![0], vec![2], vec![1, 3]]).unwrap();
        let two = h.generated_subgroup(&[2]);
        // Z4 is not an E-group, so the hypothesis is refused
        assert!(!ci_via_gwreath(&w, &two, &two).unwrap().is_proved());
        assert!(babai_ci_check(&w).unwrap().is_ci());
        assert!(section_automorphisms_factor(&w, &two, &two).unwrap());
    }
}
