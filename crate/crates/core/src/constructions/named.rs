//! Standard permutation representations of a few named groups.

use crate::error::{Error, Result};
use crate::permcore::{parse_cycles, PermGroup, Permutation};

fn cycle(points: impl IntoIterator<Item = usize>, degree: usize) -> Permutation {
    let pts: Vec<usize> = points.into_iter().collect();
    let mut images: Vec<u32> = (0..degree as u32).collect();
    for (i, &x) in pts.iter().enumerate() {
        images[x] = pts[(i + 1) % pts.len()] as u32;
    }
    Permutation::from_images(images).expect("a cycle is a bijection")
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn primitive_root(p: u64) -> u64 {
    (2..p)
        .find(|&r| {
            let mut x = 1;
            (1..p - 1).all(|_| {
                x = x * r % p;
                x != 1
            })
        })
        .unwrap_or(1)
}

fn psl2(p: u64) -> PermGroup {
    // Points 0..p-1 are field elements, p is infinity.
    let n = p as usize + 1;
    let inf = p;
    let shift: Vec<u32> = (0..=p).map(|x| if x == inf { inf } else { (x + 1) % p } as u32).collect();
    let r2 = primitive_root(p).pow(2) % p;
    let scale: Vec<u32> = (0..=p).map(|x| if x == inf { inf } else { x * r2 % p } as u32).collect();
    let inv = |x: u64| (1..p).find(|&y| x * y % p == 1).unwrap();
    let flip: Vec<u32> = (0..=p)
        .map(|x| match x {
            _ if x == inf => 0,
            0 => inf,
            _ => (p - inv(x)) % p,
        } as u32)
        .collect();
    let gens = [shift, scale, flip].into_iter().map(|v| Permutation::from_images(v).unwrap()).collect();
    PermGroup::new(n, gens).unwrap()
}

fn parse_psl(name: &str) -> Option<u64> {
    let inner = name.strip_prefix("PSL(2,").or_else(|| name.strip_prefix("L2("))?.strip_suffix(')')?;
    inner.trim().parse().ok()
}

/// Recognized names: `A{n}`, `S{n}`, `C{n}`, `D{2m}` (dihedral of order
/// `2m` on `m` points), `PSL(2,p)` for primes `p ≥ 5`, and `M11`.
pub fn named_group(name: &str) -> Result<PermGroup> {
    let bad = || Error::Malformed(format!("unknown group name {name:?}"));
    let name = name.trim();
    if name == "M11" {
        let gens = ["(1 2 3 4 5 6 7 8 9 10 11)", "(3 7 11 8)(4 10 5 6)"];
        return PermGroup::new(11, gens.iter().map(|s| parse_cycles(s, 11).unwrap()).collect());
    }
    if let Some(p) = parse_psl(name) {
        if p < 5 || !is_prime(p) {
            return Err(Error::Malformed(format!("{name}: only prime fields p ≥ 5 are supported")));
        }
        return Ok(psl2(p));
    }
    let (head, tail) = name.split_at(1);
    let n: usize = tail.parse().map_err(|_| bad())?;
    match head {
        "A" if n >= 3 => {
            // (1..n) is even for odd n; otherwise use (2..n).
            let long = if n % 2 == 1 { cycle(0..n, n) } else { cycle(1..n, n) };
            PermGroup::new(n, vec![cycle(0..3, n), long])
        }
        "A" if n >= 1 => Ok(PermGroup::trivial(n)),
        "S" if n >= 2 => PermGroup::new(n, vec![cycle(0..n, n), cycle(0..2, n)]),
        "S" if n == 1 => Ok(PermGroup::trivial(1)),
        "C" if n >= 1 => PermGroup::new(n, vec![cycle(0..n, n)]),
        "D" if n >= 6 && n.is_multiple_of(2) => {
            let m = n / 2;
            let refl: Vec<u32> = (0..m).map(|i| ((m - i) % m) as u32).collect();
            PermGroup::new(m, vec![cycle(0..m, m), Permutation::from_images(refl)?])
        }
        _ => Err(bad()),
    }
}
