//! Relabeling isomorphisms between bracket tables.

use std::collections::BTreeMap;

use super::algebra::OpenAlgebra;

/// First index bijection (lexicographic over A's generators in increasing
/// order, trying B's generators in increasing order) that carries A's
/// table onto B's exactly and A's relations into B's.
pub fn find_relabeling_isomorphism(a: &OpenAlgebra, b: &OpenAlgebra) -> Option<BTreeMap<u32, u32>> {
    let ga: Vec<u32> = a.generators().map(|g| g.index).collect();
    let gb: Vec<u32> = b.generators().map(|g| g.index).collect();
    if ga.len() != gb.len() || a.table().len() != b.table().len() {
        return None;
    }
    let mut map = BTreeMap::new();
    let mut used = vec![false; gb.len()];
    if search(a, b, &ga, &gb, 0, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

fn search(
    a: &OpenAlgebra,
    b: &OpenAlgebra,
    ga: &[u32],
    gb: &[u32],
    k: usize,
    map: &mut BTreeMap<u32, u32>,
    used: &mut [bool],
) -> bool {
    if k == ga.len() {
        return full_check(a, b, map);
    }
    for (slot, &target) in gb.iter().enumerate() {
        if used[slot] {
            continue;
        }
        map.insert(ga[k], target);
        used[slot] = true;
        if partial_ok(a, b, map) && search(a, b, ga, gb, k + 1, map, used) {
            return true;
        }
        used[slot] = false;
        map.remove(&ga[k]);
    }
    false
}

/// Check the table entries whose arguments and values are fully mapped.
fn partial_ok(a: &OpenAlgebra, b: &OpenAlgebra, map: &BTreeMap<u32, u32>) -> bool {
    for ((i, j), v) in a.table() {
        let (Some(&x), Some(&y)) = (map.get(i), map.get(j)) else { continue };
        if !v.generators().iter().all(|g| map.contains_key(g)) {
            continue;
        }
        let image = v.relabel(&|g| map[&g]);
        match b.bracket_entry(x, y) {
            Some(w) if w == image => {}
            _ => return false,
        }
    }
    true
}

fn full_check(a: &OpenAlgebra, b: &OpenAlgebra, map: &BTreeMap<u32, u32>) -> bool {
    if !partial_ok(a, b, map) {
        return false;
    }
    // Every B entry must be hit by some A entry.
    let inv: BTreeMap<u32, u32> = map.iter().map(|(k, v)| (*v, *k)).collect();
    for (i, j) in b.table().keys() {
        if a.bracket_entry(inv[i], inv[j]).is_none() {
            return false;
        }
    }
    let ra = a.relations();
    ra.len() == b.relations().len() && ra.iter().all(|r| b.normalize(&r.relabel(&|g| map[&g])).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::Provenance;

    fn tower(x: u32, pairs: [u32; 2]) -> OpenAlgebra {
        let mut a = OpenAlgebra::free([x, 4, 5]);
        a.name_bracket(x, 4, pairs[0], Provenance::Bracket(x, 4)).unwrap();
        a.name_bracket(x, 5, pairs[1], Provenance::Bracket(x, 5)).unwrap();
        a.name_bracket(4, 5, 12, Provenance::Bracket(4, 5)).unwrap();
        a
    }

    #[test]
    fn reductions_i_and_ii() {
        let m = find_relabeling_isomorphism(&tower(3, [10, 11]), &tower(2, [8, 9])).unwrap();
        let expect: BTreeMap<u32, u32> = [(3, 2), (4, 4), (5, 5), (10, 8), (11, 9), (12, 12)].into_iter().collect();
        assert_eq!(m, expect);
    }

    #[test]
    fn self_is_identity() {
        let a = tower(3, [10, 11]);
        let m = find_relabeling_isomorphism(&a, &a).unwrap();
        assert!(m.iter().all(|(k, v)| k == v));
    }

    #[test]
    fn abelian_is_not_isomorphic() {
        let ab = OpenAlgebra::free(1..=5);
        assert!(find_relabeling_isomorphism(&tower(3, [10, 11]), &ab).is_none());
        let ab6 = OpenAlgebra::free(1..=6);
        assert!(find_relabeling_isomorphism(&tower(3, [10, 11]), &ab6).is_none());
    }
}
