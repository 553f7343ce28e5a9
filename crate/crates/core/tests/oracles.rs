mod common;

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use schurci::catalog::enumerate_srings;
use schurci::ci::{babai_ci_check, iso1_search, iso1_star};
use schurci::group::make_group;
use schurci::perm::{aut_scheme, regular_subgroups, ColorMatrix, PermGroup};
use schurci::schur::SchurPartition;

use common::{brute_automorphisms, brute_iso1, brute_regular_subgroups, perm_order, small_groups};

fn element_set(g: &PermGroup) -> BTreeSet<Vec<u32>> {
    g.elements(1_000_000).unwrap().iter().map(|p| p.images().to_vec()).collect()
}

#[test]
fn aut_scheme_equals_brute_force_on_srings() {
    for group in small_groups() {
        for p in enumerate_srings(&group).unwrap() {
            let m = ColorMatrix::from_partition(&p);
            let brute = brute_automorphisms(group.order(), &|x, y| m.color(x, y));
            assert_eq!(element_set(&aut_scheme(&m).unwrap()), brute, "{p:?}");
        }
    }
}

#[test]
fn aut_scheme_equals_brute_force_on_random_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in 2..=7usize {
        for _ in 0..20 {
            let colors_used = rng.gen_range(1..=3);
            // symmetric-ish matrices with a constant diagonal give larger groups
            let mut colors = vec![0u32; n * n];
            for i in 0..n {
                for j in 0..n {
                    colors[i * n + j] = if i == j { 0 } else { 1 + rng.gen_range(0..colors_used) };
                }
            }
            if rng.gen_bool(0.5) {
                for i in 0..n {
                    for j in 0..i {
                        colors[i * n + j] = colors[j * n + i];
                    }
                }
            }
            let m = ColorMatrix::new(n, colors).unwrap();
            let brute = brute_automorphisms(n, &|x, y| m.color(x, y));
            assert_eq!(element_set(&aut_scheme(&m).unwrap()), brute);
        }
    }
}

#[test]
fn regular_subgroups_of_sym4() {
    let s4 = PermGroup::symmetric(4);
    let z4 = make_group(&[4]).unwrap();
    let klein = make_group(&[2, 2]).unwrap();
    let cyclic = regular_subgroups(&s4, &z4, 100).unwrap();
    let elementary = regular_subgroups(&s4, &klein, 100).unwrap();

    let brute = brute_regular_subgroups(4);
    let brute_cyclic: BTreeSet<_> = brute.iter().filter(|g| g.iter().any(|p| perm_order(p) == 4)).cloned().collect();
    let brute_klein: BTreeSet<_> = brute.iter().filter(|g| g.iter().all(|p| perm_order(p) <= 2)).cloned().collect();

    assert_eq!(cyclic.len(), brute_cyclic.len());
    assert_eq!(elementary.len(), brute_klein.len());
    assert_eq!(cyclic.iter().map(element_set).collect::<BTreeSet<_>>(), brute_cyclic);
    assert_eq!(elementary.iter().map(element_set).collect::<BTreeSet<_>>(), brute_klein);
    println!("Sym(4): {} cyclic, {} elementary regular subgroups", brute_cyclic.len(), brute_klein.len());
}

fn block_sizes(p: &SchurPartition) -> Vec<usize> {
    let mut s: Vec<usize> = p.blocks().iter().map(Vec::len).collect();
    s.sort_unstable();
    s
}

#[test]
fn iso1_search_equals_brute_force() {
    for group in small_groups() {
        let rings = enumerate_srings(&group).unwrap();
        for a in &rings {
            for b in &rings {
                if block_sizes(a) != block_sizes(b) {
                    continue;
                }
                let found: BTreeSet<Vec<u32>> = iso1_search(a, b, 1_000_000)
                    .unwrap()
                    .iter()
                    .map(|p| p.images().to_vec())
                    .collect();
                let brute = brute_iso1(&group, a.block_labels(), b.block_labels());
                assert_eq!(found, brute, "{a:?} -> {b:?}");
            }
        }
    }
}

#[test]
fn iso1_star_equals_brute_force() {
    for group in small_groups().into_iter().filter(|g| g.order() <= 8) {
        for p in enumerate_srings(&group).unwrap() {
            let found: BTreeSet<Vec<u32>> = iso1_star(&p, 1_000_000)
                .unwrap()
                .iter()
                .map(|q| q.images().to_vec())
                .collect();
            assert_eq!(found, common::brute_iso1_star(&p), "{p:?}");
        }
    }
}

/// CI by definition at small order: every Cayley-isomorphic pair of
/// colorings in `Iso₁` classes is related by a group automorphism, i.e.
/// `Iso₁(𝔄, *) = Aut(𝔄)₁ · Aut(H)`.
#[test]
fn babai_agrees_with_iso1_definition() {
    for group in small_groups() {
        let auts: Vec<Vec<u32>> = group
            .automorphism_group(10_000)
            .unwrap()
            .iter()
            .map(|a| a.perm().to_vec())
            .collect();
        for p in enumerate_srings(&group).unwrap() {
            let m = ColorMatrix::from_partition(&p);
            let stab: Vec<Vec<u32>> = brute_automorphisms(group.order(), &|x, y| m.color(x, y))
                .into_iter()
                .filter(|a| a[0] == 0)
                .collect();
            let product: BTreeSet<Vec<u32>> = stab
                .iter()
                .flat_map(|a| auts.iter().map(move |phi| common::compose(a, phi)))
                .collect();
            let iso = common::brute_iso1_star(&p);
            assert_eq!(babai_ci_check(&p).unwrap().is_ci(), iso == product, "{p:?}");
        }
    }
}
