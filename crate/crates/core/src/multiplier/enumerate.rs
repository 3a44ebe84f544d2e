use crate::error::{Error, Result};
use crate::special::Parity;

/// A term of the subset/matching expansion: `subset` holds the positions
/// that contribute a factor `ξ_α`, `matching` pairs up every other position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetTerm {
    pub w: usize,
    pub subset: Vec<usize>,
    pub matching: Vec<(usize, usize)>,
}

/// Size of the `ξ` subset at level `w`: `2w` for even tensors, `2w+1` for odd.
pub(crate) fn subset_size(w: usize, parity: Parity) -> usize {
    match parity {
        Parity::Even => 2 * w,
        Parity::Odd => 2 * w + 1,
    }
}

/// All subsets of the positions `0..t` of the size prescribed by level `w`,
/// in lexicographic order.
pub fn enumerate_subsets(t: usize, w: usize, parity: Parity) -> Vec<Vec<usize>> {
    let k = subset_size(w, parity);
    let mut out = Vec::new();
    if k > t {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        // rightmost slot that can still move
        let mut i = k;
        while i > 0 && idx[i - 1] == t - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// All perfect matchings of `positions`; there are `(m−1)!!` of them for
/// `m` positions. Each matching lists its pairs by increasing first element.
pub fn enumerate_matchings(positions: &[usize]) -> Result<Vec<Vec<(usize, usize)>>> {
    if positions.len() % 2 == 1 {
        return Err(Error::domain(format!(
            "cannot perfectly match an odd number ({}) of positions",
            positions.len()
        )));
    }
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(positions.len() / 2);
    match_rec(positions.to_vec(), &mut current, &mut out);
    Ok(out)
}

fn match_rec(rest: Vec<usize>, current: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
    if rest.is_empty() {
        out.push(current.clone());
        return;
    }
    let first = rest[0];
    for j in 1..rest.len() {
        let remaining: Vec<usize> =
            rest[1..].iter().enumerate().filter(|&(k, _)| k + 1 != j).map(|(_, &p)| p).collect();
        current.push((first, rest[j]));
        match_rec(remaining, current, out);
        current.pop();
    }
}

/// Every `(level, subset, matching)` term of a tensor of order `t`.
pub fn enumerate_terms(t: usize, parity: Parity) -> Vec<SubsetTerm> {
    let top = match parity {
        Parity::Even => t / 2,
        Parity::Odd => (t.saturating_sub(1)) / 2,
    };
    let mut terms = Vec::new();
    for w in 0..=top {
        for subset in enumerate_subsets(t, w, parity) {
            let complement: Vec<usize> = (0..t).filter(|p| !subset.contains(p)).collect();
            let matchings = enumerate_matchings(&complement).expect("complement has even size");
            for matching in matchings {
                terms.push(SubsetTerm { w, subset: subset.clone(), matching });
            }
        }
    }
    terms
}
