//! Independent reference implementations used as test oracles. Nothing here
//! calls into the library's stepping or statistics code.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};

use symba_core::norms::NormId;

/// Brute-force 1D step. Returns the next row and the number of contested
/// cells (two or more distinct incoming values).
pub fn brute_step_1d(prev: &[i32], norms: &[NormId], periodic: bool) -> (Vec<i32>, usize) {
    let len = prev.len() as i64;
    let place = |raw: i64| -> Option<usize> {
        if periodic {
            Some(raw.rem_euclid(len) as usize)
        } else if (0..len).contains(&raw) {
            Some(raw as usize)
        } else {
            None
        }
    };

    // target -> [(source, value, displacement)]
    let mut incoming: BTreeMap<usize, Vec<(usize, i32, i64)>> = BTreeMap::new();
    for (a, &n) in prev.iter().enumerate() {
        if n == 0 {
            continue;
        }
        let mut visited = vec![a];
        incoming.entry(a).or_default().push((a, n, 0));
        let mut shift = n as i64;
        while let Some(t) = place(a as i64 + shift) {
            if visited.contains(&t) {
                break;
            }
            visited.push(t);
            incoming.entry(t).or_default().push((a, n, shift));
            if prev[t] == 0 {
                break;
            }
            shift = prev[t] as i64;
        }
    }

    let mut next = vec![0; prev.len()];
    let mut contested = 0;
    for (target, mut arrivals) in incoming {
        arrivals.sort_by_key(|x| x.0);
        let mut distinct: Vec<(usize, i32, i64)> = Vec::new();
        for x in arrivals {
            if distinct.iter().all(|d| d.1 != x.1) {
                distinct.push(x);
            }
        }
        if distinct.len() == 1 {
            next[target] = distinct[0].1;
            continue;
        }
        contested += 1;
        let read = |off: i64| place(target as i64 + off).map_or(0, |i| prev[i]);
        let (_, mut value, shift0) = distinct[0];
        for &(_, other, shift1) in &distinct[1..] {
            if other == value {
                continue;
            }
            let (v, u) = if shift0 > 0 && shift1 <= 0 {
                (shift0.abs(), shift1.abs())
            } else if shift0 <= 0 && shift1 > 0 {
                (shift1.abs(), shift0.abs())
            } else {
                (shift0.abs(), shift1.abs())
            };
            let occupied = prev[target] != 0;
            let raw: i64 = match norms[target] {
                NormId::Zero => 0,
                NormId::A | NormId::B => {
                    let m = if norms[target] == NormId::A { u + v } else { u + v - 1 };
                    let (p, q) = (read(u), read(-v));
                    if occupied {
                        0
                    } else if p * q > 0 {
                        m
                    } else {
                        -m
                    }
                }
                NormId::C => {
                    if occupied {
                        0
                    } else {
                        read(-v) as i64 - read(u) as i64
                    }
                }
                NormId::D => {
                    let s = prev[target] as i64;
                    if read(s) == read(-s) {
                        2 * read(s) as i64 - s
                    } else {
                        0
                    }
                }
            };
            value = if raw == 0 || raw.abs() >= len { 0 } else { raw as i32 };
        }
        next[target] = value;
    }
    (next, contested)
}

/// Plain elementary CA step on a ring.
pub fn eca_step(rule: u8, row: &[bool]) -> Vec<bool> {
    let n = row.len();
    (0..n)
        .map(|i| {
            let l = row[(i + n - 1) % n] as u32;
            let c = row[i] as u32;
            let r = row[(i + 1) % n] as u32;
            rule & (1 << (4 * l + 2 * c + r)) != 0
        })
        .collect()
}

/// Entropy in bits with compensated summation over `-p log2 p`.
pub fn entropy_neumaier(symbols: &[i32]) -> f64 {
    let mut counts: HashMap<i32, usize> = HashMap::new();
    for &s in symbols {
        *counts.entry(s).or_default() += 1;
    }
    let n = symbols.len() as f64;
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for &c in counts.values() {
        let p = c as f64 / n;
        let term = -p * p.log2();
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Wilson bounds as the two roots of `(phat - p)^2 n = z^2 p (1 - p)`.
pub fn wilson_roots(successes: usize, n: usize, z: f64) -> (f64, f64) {
    let nf = n as f64;
    let phat = successes as f64 / nf;
    let a = nf + z * z;
    let b = -(2.0 * nf * phat + z * z);
    let c = nf * phat * phat;
    let disc = (b * b - 4.0 * a * c).max(0.0).sqrt();
    let lo = (-b - disc) / (2.0 * a);
    let hi = (-b + disc) / (2.0 * a);
    (lo.max(0.0), hi.min(1.0))
}

/// Repeated-window fraction from an explicit multiset of all windows.
pub fn multiset_rk(strands: &[Vec<u8>], k: usize) -> f64 {
    let windows: Vec<&[u8]> = strands.iter().filter(|s| s.len() >= k).flat_map(|s| s.windows(k)).collect();
    if windows.is_empty() {
        return 0.0;
    }
    let singletons = windows.iter().filter(|w| windows.iter().filter(|x| x == w).count() == 1).count();
    (windows.len() - singletons) as f64 / windows.len() as f64
}
