use crate::{Error, Result};

/// Koszul sign of a graded permutation.
///
/// `perm` is 1-based: `perm[i-1] = σ(i)`. The sign is `(-1)^Σ d_i d_j` over
/// pairs `i < j` with `σ(i) > σ(j)`.
pub fn koszul_sign(perm: &[usize], degrees: &[i64]) -> Result<i64> {
    if perm.len() != degrees.len() {
        return Err(Error::Input(format!(
            "permutation has {} entries but {} degrees were given",
            perm.len(),
            degrees.len()
        )));
    }
    let k = perm.len();
    let mut seen = vec![false; k];
    for &p in perm {
        if p == 0 || p > k || seen[p - 1] {
            return Err(Error::Input(format!("{perm:?} is not a bijection on 1..{k}")));
        }
        seen[p - 1] = true;
    }
    let mut e = 0i64;
    for i in 0..k {
        if degrees[i] % 2 == 0 {
            continue;
        }
        for j in i + 1..k {
            if perm[i] > perm[j] && degrees[j] % 2 != 0 {
                e += 1;
            }
        }
    }
    Ok(if e % 2 == 0 { 1 } else { -1 })
}

/// Sign of reordering graded items. `order[t]` is the source index of the
/// item placed at position `t`; `degrees` are indexed by source position.
pub fn koszul_sign_of_order(order: &[usize], degrees: &[i64]) -> i64 {
    let mut e = 0usize;
    // pairs of odd items placed out of source order
    let mut placed_odd: Vec<usize> = Vec::with_capacity(order.len());
    for &src in order {
        if degrees[src] % 2 != 0 {
            e += placed_odd.iter().filter(|&&p| p > src).count();
            placed_odd.push(src);
        }
    }
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}
