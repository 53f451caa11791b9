//! Explicit faithful flows on wheels.
//!
//! On a wheel, conservation at rim vertex `i` says the spoke into it
//! carries `e_i - e_{i-1}`, where `e_i` is the value on rim edge `i`, and the
//! centre then balances automatically. So every construction below only
//! chooses rim values; spokes follow.

use std::collections::BTreeMap;

use num_rational::Ratio;
use thiserror::Error;

use super::{predicate_cfn5, segments, Item, Segment, WheelTemplate};
use crate::flow::FlowAssignment;
use crate::graph::Multigraph;
use crate::si5::{Atom, Mod5};

type Q = Ratio<i64>;

fn q(n: i64, d: i64) -> Q {
    Ratio::new(n, d)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertError {
    #[error("the template has no faithful flow")]
    PredicateHolds,
    #[error("no constructive case covers this template")]
    NoBranch,
    #[error("parameter check failed: {0}")]
    InvalidParams(&'static str),
}

/// Rational parameters of the flow families.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateParams {
    /// Fan and connector flows for capacities containing (4,1).
    pub x: Q,
    pub y: Q,
    pub z: Q,
    /// Flows for capacities containing (1,2)u(3,4): x = 1+2δ, y = 7/2+2δ.
    pub delta: Q,
    /// Odd-cycle fix-up for measure-3 capacities containing (4,1) and (2,3).
    pub m3_x: Q,
    pub m3_z: Q,
    /// Odd rim for measure-4 capacities.
    pub m4_x: Q,
    pub m4_z: Q,
    pub alpha: Q,
}

impl Default for CertificateParams {
    fn default() -> Self {
        CertificateParams {
            x: q(6, 5),
            y: q(6, 5),
            z: q(22, 5),
            delta: q(1, 10),
            m3_x: q(7, 5),
            m3_z: q(43, 10),
            m4_x: q(3, 2),
            m4_z: q(8, 5),
            alpha: q(11, 10),
        }
    }
}

fn open(v: Q, lo: Q, hi: Q) -> bool {
    lo < v && v < hi
}

fn in_atom(v: Q, k: i64) -> bool {
    Mod5::new(v).atom() == Atom::Interval(k as u8)
}

impl CertificateParams {
    pub fn validate(&self) -> Result<(), CertError> {
        let int = |k: i64| Q::from_integer(k);
        let checks: [(bool, &'static str); 12] = [
            (open(self.x, int(1), q(3, 2)), "x in (1, 3/2)"),
            (open(self.y, int(1), int(2)), "y in (1, 2)"),
            (open(self.z, int(4), int(5)), "z in (4, 5)"),
            (in_atom(self.x + self.z, 0), "x + z in (0, 1)"),
            (
                [1, 2, 3].iter().any(|&k| in_atom(self.x + self.y * 2, k)),
                "x + 2y in (1, 4)",
            ),
            (open(self.delta, int(0), q(1, 4)), "delta in (0, 1/4)"),
            (open(self.m3_x, int(1), q(3, 2)), "measure-3 x in (1, 3/2)"),
            (
                open(self.m3_z, int(4), int(5)) && in_atom(self.m3_x + self.m3_z, 0),
                "measure-3 z in (4,5), x+z in (0,1)",
            ),
            (
                in_atom(self.m3_x * 2 + self.m3_z, 2),
                "measure-3 2x + z in (2, 3)",
            ),
            (
                open(self.m4_x, int(1), int(2)) && open(self.m4_z, int(1), int(2)),
                "measure-4 x, z in (1, 2)",
            ),
            (
                in_atom(self.m4_x + self.m4_z, 3),
                "measure-4 x + z in (3, 4)",
            ),
            (
                self.alpha > int(1)
                    && [1, 2, 3]
                        .iter()
                        .any(|&k| in_atom(self.alpha + self.m4_z, k))
                    && in_atom(self.m4_x - self.alpha, 0),
                "measure-4 alpha > 1, alpha + z in (1, 4), x - alpha in (0, 1)",
            ),
        ];
        match checks.iter().find(|(ok, _)| !ok) {
            Some((_, what)) => Err(CertError::InvalidParams(what)),
            None => Ok(()),
        }
    }
}

/// Turns rim values along `cycle` (around `hub`) into edge values of `g`.
fn assignment(g: &Multigraph, hub: usize, cycle: &[usize], rim: &[Q]) -> FlowAssignment {
    let n = cycle.len();
    let mut directed: BTreeMap<(usize, usize), Q> = BTreeMap::new();
    for k in 0..n {
        directed.insert((cycle[k], cycle[(k + 1) % n]), rim[k]);
        directed.insert((hub, cycle[k]), rim[k] - rim[(k + n - 1) % n]);
    }
    let mut values = BTreeMap::new();
    for e in g.edges() {
        // On W_2 both rim edges join the same pair; match them by id.
        let v = if n == 2 && e.tail != hub && e.head != hub {
            rim[e.id]
        } else if let Some(&v) = directed.get(&(e.tail, e.head)) {
            v
        } else {
            -directed[&(e.head, e.tail)]
        };
        values.insert(e.id, Mod5::new(v));
    }
    FlowAssignment { values }
}

/// Rim values for capacities containing (4,1). Each fan starts from a
/// lateral `±x` and alternates `±(z+x)`, `±z`; it keeps the sign when its
/// length is even. Connectors walk between the levels `x`, `5/2`, `-x`.
/// With `allow_mismatch` the closing lateral may come back as `-x`.
fn four_one_rim(
    segs: &[Segment],
    n: usize,
    x: Q,
    z: Q,
    allow_mismatch: bool,
) -> Option<(Vec<Q>, bool)> {
    let fixed_flips = segs
        .iter()
        .filter(|s| matches!(s.item, Item::Fan(l) if l % 2 == 1) || s.item == Item::Connector(1))
        .count();
    let first_long = segs
        .iter()
        .position(|s| matches!(s.item, Item::Connector(m) if m >= 2));
    let reverse_long = if fixed_flips % 2 == 1 {
        match first_long {
            Some(p) => Some(p),
            None if allow_mismatch => None,
            None => return None,
        }
    } else {
        None
    };
    let mut rim = vec![Q::from_integer(0); n];
    let mut d = Q::from_integer(1);
    for (k, seg) in segs.iter().enumerate() {
        match seg.item {
            Item::Fan(l) => {
                for j in 1..l {
                    rim[(seg.start + j - 1) % n] = d * if j % 2 == 1 { z + x } else { z };
                }
                if l % 2 == 1 {
                    d = -d;
                }
            }
            Item::Connector(m) => {
                let target = match m {
                    0 => d,
                    1 => -d,
                    _ if reverse_long == Some(k) => -d,
                    _ => d,
                };
                let plain_end = if m % 2 == 0 { d } else { -d };
                for j in 0..=m {
                    let sign = if j % 2 == 0 { d } else { -d };
                    let v = if plain_end == target {
                        sign * x
                    } else if j == 0 {
                        d * x
                    } else if j == 1 {
                        q(5, 2)
                    } else {
                        -sign * x
                    };
                    rim[(seg.start + j) % n] = v;
                }
                d = target;
            }
        }
    }
    Some((rim, reverse_long.is_some()))
}

/// Rim values for capacities containing (1,2)u(3,4).
fn one_two_rim(wt: &WheelTemplate, segs: Option<&[Segment]>, delta: Q) -> Option<(Vec<Q>, Branch)> {
    let n = wt.n();
    let x = q(1, 1) + delta * 2;
    let y = q(7, 2) + delta * 2;
    let Some(segs) = segs else {
        // J is the rim: alternate x and y around an even cycle.
        return (n % 2 == 0).then(|| {
            (
                (0..n).map(|i| if i % 2 == 0 { x } else { y }).collect(),
                Branch::OneTwoRim,
            )
        });
    };
    if n == 3 && wt.is_triangle() {
        return None;
    }
    let fans: Vec<Segment> = segs
        .iter()
        .copied()
        .filter(|s| matches!(s.item, Item::Fan(_)))
        .collect();
    let conns: Vec<Segment> = segs
        .iter()
        .copied()
        .filter(|s| matches!(s.item, Item::Connector(_)))
        .collect();
    let k = fans.len();
    let len = |s: &Segment| match s.item {
        Item::Fan(l) | Item::Connector(l) => l,
    };
    // conns[i] follows fans[i].
    let mut rim = vec![q(0, 1); n];
    let half = q(5, 2);
    let mut first_value = vec![x; k];
    let all_short = conns.iter().all(|c| len(c) == 1);
    let special = all_short && fans.iter().all(|f| len(f) == 2) && k % 2 == 1;
    if special {
        // One fan takes 3+δ; the rest alternate x, y, ..., ending in y.
        let f = q(3, 1) + delta;
        rim[fans[0].start] = f;
        for (i, fan) in fans.iter().enumerate().skip(1) {
            rim[fan.start] = if i % 2 == 1 { x } else { y };
        }
        for (i, c) in conns.iter().enumerate() {
            let (e0, e1) = if i == 0 {
                (q(1, 1) + delta * q(3, 2), half + delta * 2)
            } else if i == k - 1 {
                (half + delta, q(1, 1) + delta * q(3, 2))
            } else {
                let (p, qv) = (rim[fans[i].start], rim[fans[(i + 1) % k].start]);
                method_a(p, qv, x, delta)?
            };
            rim[c.start] = e0;
            rim[(c.start + 1) % n] = e1;
        }
        return Some((rim, Branch::OneTwoSpecialFan));
    }
    // Anchor: the fan after a connector of length != 1, else the fan after
    // a 1-connector that follows a fan with l > 2. With an even number of
    // 2-fans and only 1-connectors, plain alternation closes up anywhere.
    let (anchor, mut branch) = match conns.iter().position(|c| len(c) != 1) {
        Some(c) => ((c + 1) % k, Branch::OneTwoClaimOne),
        None => match fans.iter().position(|f| len(f) > 2) {
            Some(f) => ((f + 1) % k, Branch::OneTwoClaimTwo { method_b: false }),
            None => (0, Branch::OneTwoEvenTwoFans),
        },
    };
    let mut last = vec![x; k];
    for step in 0..k {
        let i = (anchor + step) % k;
        let prev = (i + k - 1) % k;
        let start = if step > 0 && len(&conns[prev]) == 1 {
            if last[prev] == x {
                y
            } else {
                x
            }
        } else {
            x
        };
        first_value[i] = start;
        let l = len(&fans[i]);
        for j in 0..l - 1 {
            rim[(fans[i].start + j) % n] = if (j % 2 == 0) == (start == x) { x } else { y };
        }
        last[i] = rim[(fans[i].start + l - 2) % n];
    }
    for (i, c) in conns.iter().enumerate() {
        let m = len(c);
        let next = (i + 1) % k;
        if m == 1 {
            let (p, qv) = (last[i], first_value[next]);
            let last_pos = (fans[i].start + len(&fans[i]) - 2) % n;
            let (e0, e1) = if p != qv {
                method_a(p, qv, x, delta)?
            } else if len(&fans[i]) > 2 {
                let (p2, e0, e1) = method_b(p == x, delta);
                rim[last_pos] = p2;
                branch = Branch::OneTwoClaimTwo { method_b: true };
                (e0, e1)
            } else {
                return None;
            };
            rim[c.start] = e0;
            rim[(c.start + 1) % n] = e1;
        } else {
            for j in 0..=m {
                rim[(c.start + j) % n] = if j == 0 || j == m {
                    half
                } else if j % 2 == 1 {
                    y
                } else {
                    x
                };
            }
        }
    }
    Some((rim, branch))
}

/// A 1-connector between fan values `p != q`.
fn method_a(p: Q, qv: Q, x: Q, delta: Q) -> Option<(Q, Q)> {
    let mu = q(7, 4) + delta / 2;
    if p == qv {
        return None;
    }
    Some(if p == x {
        (p + mu, qv - mu)
    } else {
        (p - mu, qv + mu)
    })
}

/// A 1-connector between equal fan values; also replaces the previous
/// fan's last rim value. Returns (new last value, e0, e1).
fn method_b(both_x: bool, delta: Q) -> (Q, Q, Q) {
    let b1 = |d: Q| {
        (
            q(1, 1) + d / 2,
            q(2, 1) + d * q(3, 4),
            q(3, 1) + d * q(7, 4),
        )
    };
    if both_x {
        b1(delta)
    } else {
        let (p, e0, e1) = b1(q(1, 4) - delta);
        (-p, -e0, -e1)
    }
}

/// Which construction produced a flow.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Branch {
    /// J is an even rim; rim values alternate z and z+x.
    FourOneRim,
    /// Sign rules through fans and connectors, n even.
    FourOneFans,
    /// Odd n repaired on a connector with m >= 2.
    FourOneLongConnector,
    /// J is an even rim; rim values alternate x and y.
    OneTwoRim,
    /// Alternation anchored after a connector with m != 1.
    OneTwoClaimOne,
    /// Only 1-connectors; anchored after a fan with l > 2.
    OneTwoClaimTwo {
        method_b: bool,
    },
    /// Only 2-fans and 1-connectors, evenly many.
    OneTwoEvenTwoFans,
    /// Only 2-fans and 1-connectors, oddly many; one fan takes 3+δ.
    OneTwoSpecialFan,
    MeasureThreeRim,
    /// Fan rules with the closing lateral at -x.
    MeasureThreeFans,
    MeasureFourRim,
    /// K4 relabelled so the triangle J becomes the rim.
    MeasureFourTriangle,
    /// Every edge within (1,4).
    Planar,
}

pub fn build_faithful_flow(
    wt: &WheelTemplate,
    params: &CertificateParams,
) -> Result<FlowAssignment, CertError> {
    build_faithful_flow_traced(wt, params).map(|(_, f)| f)
}

/// Like [`build_faithful_flow`], also naming the construction used.
pub fn build_faithful_flow_traced(
    wt: &WheelTemplate,
    params: &CertificateParams,
) -> Result<(Branch, FlowAssignment), CertError> {
    params.validate()?;
    if predicate_cfn5(wt) {
        return Err(CertError::PredicateHolds);
    }
    let n = wt.n();
    let g = super::build_wheel(n).expect("validated template");
    let wheel = |rim: Vec<Q>| assignment(&g, 0, &(1..=n).collect::<Vec<_>>(), &rim);
    let a = wt.a().atoms();
    let u = |k: u8| a.has(Atom::Interval(k));
    let segs = segments(wt);

    if u(4) && u(0) {
        let found = match &segs {
            None => (n % 2 == 0).then(|| {
                let rim = (0..n)
                    .map(|i| {
                        if i % 2 == 0 {
                            params.z
                        } else {
                            params.z + params.x
                        }
                    })
                    .collect();
                (rim, Branch::FourOneRim)
            }),
            Some(s) => four_one_rim(s, n, params.x, params.z, false).map(|(rim, long)| {
                (
                    rim,
                    if long {
                        Branch::FourOneLongConnector
                    } else {
                        Branch::FourOneFans
                    },
                )
            }),
        };
        if let Some((rim, branch)) = found {
            return Ok((branch, wheel(rim)));
        }
    }
    if u(1) && u(3) {
        if let Some((rim, branch)) = one_two_rim(wt, segs.as_deref(), params.delta) {
            return Ok((branch, wheel(rim)));
        }
    }
    if u(4) && u(0) && u(2) {
        let (x, z) = (params.m3_x, params.m3_z);
        let (rim, branch) = match &segs {
            // z+x, z+2x, z, then z+x and z alternating, ending on z.
            None => (
                (0..n)
                    .map(|i| match i {
                        0 => z + x,
                        1 => z + x * 2,
                        _ if i % 2 == 0 => z,
                        _ => z + x,
                    })
                    .collect(),
                Branch::MeasureThreeRim,
            ),
            Some(s) => (
                four_one_rim(s, n, x, z, true).expect("mismatch allowed").0,
                Branch::MeasureThreeFans,
            ),
        };
        return Ok((branch, wheel(rim)));
    }
    if u(0) && u(1) && u(3) && u(4) {
        let (x, z, alpha) = (params.m4_x, params.m4_z, params.alpha);
        let rim_values = |len: usize| -> Vec<Q> {
            (0..len)
                .map(|i| {
                    if i == len - 1 {
                        x - alpha
                    } else if i % 2 == 0 {
                        x
                    } else {
                        x + z
                    }
                })
                .collect()
        };
        if segs.is_none() && n % 2 == 1 {
            return Ok((Branch::MeasureFourRim, wheel(rim_values(n))));
        }
        if n == 3 && wt.is_triangle() {
            // Make the vertex off the triangle the centre of K4.
            let i = (0..3)
                .find(|&i| wt.in_j(i))
                .expect("triangle uses one rim edge");
            let hub = 1 + (i + 2) % 3;
            let f = assignment(&g, hub, &[0, 1 + i, 1 + (i + 1) % 3], &rim_values(3));
            return Ok((Branch::MeasureFourTriangle, f));
        }
    }
    if u(1) && u(2) && u(3) {
        // Every edge may take (1,4): a planar wheel carries such a flow.
        // Rim 6/5, 12/5, 18/5 then 6/5 and 18/5 alternating; even n just
        // alternates 6/5 and 18/5.
        let (lo, mid, hi) = (q(6, 5), q(12, 5), q(18, 5));
        let rim = (0..n)
            .map(|i| match (n % 2, i) {
                (1, 1) => mid,
                (1, i) if i >= 2 => {
                    if i % 2 == 0 {
                        hi
                    } else {
                        lo
                    }
                }
                (_, i) => {
                    if i % 2 == 0 {
                        lo
                    } else {
                        hi
                    }
                }
            })
            .collect();
        return Ok((Branch::Planar, wheel(rim)));
    }
    Err(CertError::NoBranch)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::verify_flow;
    use crate::si5::named;
    use crate::wheels::{rim_mask, spoke_bit};

    fn check(n: usize, j: u64, a: &str) -> FlowAssignment {
        let wt = WheelTemplate::new(n, j, named(a)).unwrap();
        let f = build_faithful_flow(&wt, &CertificateParams::default()).unwrap();
        assert!(verify_flow(&wt.capacity_graph(), &f), "{wt}: {f:?}");
        f
    }

    #[test]
    fn defaults_are_valid() {
        CertificateParams::default().validate().unwrap();
        let bad = CertificateParams {
            x: q(8, 5),
            ..Default::default()
        };
        assert!(matches!(bad.validate(), Err(CertError::InvalidParams(_))));
    }

    #[test]
    fn even_rim_with_four_one() {
        let f = check(4, rim_mask(4), "(4,1)");
        let rim: Vec<String> = (0..4).map(|e| f.get(e).unwrap().to_string()).collect();
        assert_eq!(rim, ["22/5", "3/5", "22/5", "3/5"]);
        for s in 4..8 {
            let v = f.get(s).unwrap();
            assert!(v == Mod5::from_fraction(6, 5) || v == Mod5::from_fraction(-6, 5));
        }
    }

    #[test]
    fn even_rim_with_one_two_three_four() {
        let f = check(8, rim_mask(8), "(1,2)u(3,4)");
        assert_eq!(f.get(0).unwrap().to_string(), "6/5");
        assert_eq!(f.get(1).unwrap().to_string(), "37/10");
        assert!((8..16).all(|s| f.get(s).unwrap().to_string() == "5/2"));
    }

    #[test]
    fn four_cycle_in_k4() {
        // Rim edges x1x2, x2x3 and spokes to x1, x3.
        check(3, 0b11 | spoke_bit(3, 0) | spoke_bit(3, 2), "(1,2)u(3,4)");
    }

    #[test]
    fn predicate_holds_means_no_flow() {
        let wt = WheelTemplate::new(5, rim_mask(5), named("(4,1)")).unwrap();
        assert_eq!(
            build_faithful_flow(&wt, &CertificateParams::default()),
            Err(CertError::PredicateHolds)
        );
    }
}
