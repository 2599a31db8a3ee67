//! The classification of Jordan types met by `N(B)`: nine families of
//! partitions P1 to P9, each cut out by explicit inequalities on the
//! parameters `z, m, l, s, t`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use log::warn;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::algebra::field::is_prime;
use crate::error::{Error, Result};
use crate::partition::{almost_rectangular, Partition};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CaseId {
    P1,
    P2,
    P3,
    P4,
    P5,
    P6,
    P7,
    P8,
    P9,
}

impl CaseId {
    pub const ALL: [CaseId; 9] = [
        CaseId::P1,
        CaseId::P2,
        CaseId::P3,
        CaseId::P4,
        CaseId::P5,
        CaseId::P6,
        CaseId::P7,
        CaseId::P8,
        CaseId::P9,
    ];

    /// P1 to P7 occur over every field.
    pub fn is_guaranteed(self) -> bool {
        !matches!(self, CaseId::P8 | CaseId::P9)
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for CaseId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CaseId::ALL
            .into_iter()
            .find(|c| c.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownCase(s.to_string()))
    }
}

/// One admissible parameter tuple of a row, with the derived quantities the
/// row uses. Absent parameters are `None` and omitted from JSON.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CaseParams {
    pub id: CaseId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_prime: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_double_prime: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_prime: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_double_prime: Option<i64>,
}

impl CaseParams {
    fn new(id: CaseId) -> Self {
        CaseParams {
            id,
            z: None,
            m: None,
            l: None,
            s: None,
            t: None,
            alpha: None,
            beta: None,
            alpha_prime: None,
            alpha_double_prime: None,
            gamma_prime: None,
            gamma_double_prime: None,
        }
    }

    fn zml(id: CaseId, z: usize, m: usize, l: Option<usize>) -> Self {
        CaseParams { z: Some(z), m: Some(m), l, ..CaseParams::new(id) }
    }
}

impl fmt::Display for CaseParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.id)?;
        let named = [("z", self.z), ("m", self.m), ("l", self.l), ("s", self.s), ("t", self.t)];
        let body: Vec<String> = named
            .iter()
            .filter_map(|(k, v)| v.map(|v| format!("{k}={v}")))
            .collect();
        if !body.is_empty() {
            write!(f, "({})", body.join(", "))?;
        }
        Ok(())
    }
}

/// The auxiliary numbers of the table caption and of the `l >= 2m` analysis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Greek {
    pub alpha_caption: i64,
    pub beta_caption: i64,
    pub alpha_12: i64,
    pub beta_12: i64,
    /// `None` when `z + l - m <= 0`.
    pub gamma_12: Option<i64>,
    pub delta_12: Option<i64>,
}

fn ceil_div(a: i64, b: i64) -> i64 {
    Integer::div_ceil(&a, &b)
}

pub fn greek(n: usize, z: usize, l: usize, m: usize) -> Result<Greek> {
    if n == 0 || z >= n || m == 0 || l == 0 || l > n - z {
        return Err(Error::InvalidArgument(format!(
            "greek needs 0 <= z < n, m > 0 and 0 < l <= n - z; got n={n}, z={z}, l={l}, m={m}"
        )));
    }
    let (n, z, l, m) = (n as i64, z as i64, l as i64, m as i64);
    let alpha_caption = ceil_div(n + z, l + 2 * z);
    let alpha_12 = ceil_div(n + m, z + m);
    let (gamma_12, delta_12) = if z + l - m > 0 {
        let g = ceil_div(n - m, z + l - m);
        (Some(g), Some(g * (z + l - m) - (n - m)))
    } else {
        (None, None)
    };
    Ok(Greek {
        alpha_caption,
        beta_caption: alpha_caption * (l + 2 * z) - (n + z),
        alpha_12,
        beta_12: alpha_12 * (z + m) - (n + m),
        gamma_12,
        delta_12,
    })
}

/// Raised when a tuple passing every printed constraint still produces no
/// partition (a negative or overfull block).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConsistencyAlarm {
    pub params: CaseParams,
    pub reason: String,
}

/// `[total]^k` allowing the empty `[0]^0`; anything else out of range is infeasible.
fn block(total: i64, k: i64) -> std::result::Result<Partition, String> {
    match (total, k) {
        (0, 0) => Ok(Partition::empty()),
        (t, k) if k >= 1 && t >= k => {
            Ok(almost_rectangular(t as usize, k as usize).expect("range checked"))
        }
        (t, k) => Err(format!("[{t}]^{k} is not a partition")),
    }
}

/// Explicit exponent groups; zero exponents vanish, negative data is infeasible.
fn groups(gs: &[(i64, i64)]) -> std::result::Result<Partition, String> {
    let mut out = Vec::new();
    for &(part, mult) in gs {
        if mult < 0 || (mult > 0 && part <= 0) {
            return Err(format!("group {part}^{mult} is not admissible"));
        }
        out.push((part as usize, mult as usize));
    }
    Ok(Partition::from_groups(&out))
}

struct Collector {
    n: usize,
    out: BTreeSet<(Partition, CaseParams)>,
    alarms: Vec<ConsistencyAlarm>,
}

impl Collector {
    fn push(&mut self, params: CaseParams, built: std::result::Result<Partition, String>) {
        match built {
            Ok(p) if p.sum() == 2 * self.n => {
                self.out.insert((p, params));
            }
            Ok(p) => self.alarm(params, format!("{p} does not sum to {}", 2 * self.n)),
            Err(reason) => self.alarm(params, reason),
        }
    }

    fn alarm(&mut self, params: CaseParams, reason: String) {
        warn!("consistency alarm at n={} for {params}: {reason}", self.n);
        self.alarms.push(ConsistencyAlarm { params, reason });
    }
}

/// Every partition of one row, each with the parameter tuple producing it.
pub fn case_partitions(case: CaseId, n: usize) -> Result<BTreeSet<(Partition, CaseParams)>> {
    Ok(case_partitions_checked(case, n)?.0)
}

/// As [`case_partitions`], also returning the tuples that failed to assemble.
pub fn case_partitions_checked(
    case: CaseId,
    n: usize,
) -> Result<(BTreeSet<(Partition, CaseParams)>, Vec<ConsistencyAlarm>)> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let mut col = Collector { n, out: BTreeSet::new(), alarms: Vec::new() };
    let ni = n as i64;
    if case == CaseId::P1 {
        for s in 1..=2 * n {
            let params = CaseParams { s: Some(s), ..CaseParams::new(CaseId::P1) };
            col.push(params, block(2 * ni, s as i64));
        }
        return Ok((col.out, col.alarms));
    }
    for z in 0..n {
        let zi = z as i64;
        let room = n - z;
        match case {
            CaseId::P2 => {
                for m in 1..room {
                    let mi = m as i64;
                    for l in 2 * m..room {
                        let li = l as i64;
                        if ceil_div(ni + mi, mi + zi) > ceil_div(ni - mi, li - mi + zi) {
                            p2_push(&mut col, z, m, l);
                        }
                    }
                    p2_push(&mut col, z, m, room);
                }
            }
            CaseId::P3 | CaseId::P4 => {
                for m in 1..room {
                    for l in m..(2 * m).min(room) {
                        let (mi, li) = (m as i64, l as i64);
                        let g = greek(n, z, l, m)?;
                        let (alpha, beta) = (g.alpha_caption, g.beta_caption);
                        let mut params = CaseParams::zml(case, z, m, Some(l));
                        params.alpha = Some(alpha);
                        params.beta = Some(beta);
                        if case == CaseId::P3 {
                            if ni + li - mi > alpha * (li + 2 * zi) {
                                let ap = li - mi + (2 * mi - li) * alpha;
                                params.alpha_prime = Some(ap);
                                let built = block(ni + ap, mi + zi)
                                    .and_then(|a| Ok(a.join(&block(ni - ap, li - mi + zi)?)));
                                col.push(params, built);
                            }
                        } else {
                            let v = alpha * (li + 2 * zi);
                            if ni + mi + 2 * zi <= v && v < ni + li + zi {
                                let app = mi - (2 * mi - li) * alpha;
                                params.alpha_double_prime = Some(app);
                                let built = block(ni + app, li - mi + zi)
                                    .and_then(|a| Ok(a.join(&block(ni - app, mi + zi)?)));
                                col.push(params, built);
                            }
                        }
                    }
                }
            }
            CaseId::P5 => {
                for m in 2..=room {
                    let params = CaseParams::zml(case, z, m, None);
                    let built = block(ni, zi + 1)
                        .and_then(|a| Ok(a.join(&block(ni, m as i64 + zi)?)));
                    col.push(params, built);
                }
            }
            CaseId::P6 | CaseId::P7 => {
                for m in 1..=room {
                    for l in 1..room {
                        let (mi, li) = (m as i64, l as i64);
                        let g = greek(n, z, l, m)?;
                        let (alpha, beta) = (g.alpha_caption, g.beta_caption);
                        let base = m <= l && l < 2 * m;
                        let admissible = if case == CaseId::P6 {
                            (base && (li - mi - zi).max(0) <= beta && beta < (mi + zi).min(li))
                                || (0 <= beta && beta < li && l < m)
                        } else {
                            base && (mi + zi).max(li) <= beta
                                && beta < (2 * li - mi + zi).min(li + 2 * zi)
                        };
                        if !admissible {
                            continue;
                        }
                        let mut params = CaseParams::zml(case, z, m, Some(l));
                        params.alpha = Some(alpha);
                        params.beta = Some(beta);
                        let built = if case == CaseId::P6 {
                            groups(&[
                                (2 * alpha, li - beta),
                                (2 * alpha - 1, 2 * zi),
                                (2 * alpha - 2, beta),
                            ])
                        } else {
                            groups(&[
                                (2 * alpha - 1, 2 * li - mi + zi - beta),
                                (2 * alpha - 2, 2 * mi - li + 2 * zi),
                                (2 * alpha - 3, beta - mi - zi),
                            ])
                        };
                        col.push(params, built);
                    }
                }
            }
            CaseId::P8 | CaseId::P9 => {
                for m in 1..room {
                    if 2 * m >= room {
                        break;
                    }
                    let mi = m as i64;
                    let w = mi + zi;
                    let a = ceil_div(ni + mi, w);
                    if case == CaseId::P8 {
                        if ceil_div(ni + mi + 2 * zi, w) != a || a < 5 {
                            continue;
                        }
                        let t_max = mi.min(mi - ni + ceil_div(ni - mi, w) * w);
                        for t in 1..=t_max {
                            let gp = mi - ceil_div(ni - zi, w) * t;
                            let mut params = CaseParams::zml(case, z, m, None);
                            params.t = Some(t as usize);
                            params.gamma_prime = Some(gp);
                            let built = block(ni + gp, w - t)
                                .and_then(|x| Ok(x.join(&block(ni - gp, w + t)?)));
                            col.push(params, built);
                        }
                    } else {
                        if ceil_div(ni - mi, w) > ceil_div(ni - zi, w) || a < 4 {
                            continue;
                        }
                        for t in 1.. {
                            if ni + zi + t > a * w {
                                break;
                            }
                            if a * w > ni + 2 * mi + zi - t {
                                continue;
                            }
                            let gpp = mi + ceil_div(ni - mi - 2 * zi, w) * t;
                            let mut params = CaseParams::zml(case, z, m, None);
                            params.t = Some(t as usize);
                            params.gamma_double_prime = Some(gpp);
                            let built = block(ni + gpp, w + t)
                                .and_then(|x| Ok(x.join(&block(ni - gpp, w - t)?)));
                            col.push(params, built);
                        }
                    }
                }
            }
            CaseId::P1 => unreachable!("handled above"),
        }
    }
    Ok((col.out, col.alarms))
}

fn p2_push(col: &mut Collector, z: usize, m: usize, l: usize) {
    let (n, z, m, l) = (col.n as i64, z as i64, m as i64, l as i64);
    let params = CaseParams::zml(CaseId::P2, z as usize, m as usize, Some(l as usize));
    let built = block(n + m, m + z).and_then(|a| Ok(a.join(&block(n - m, l - m + z)?)));
    col.push(params, built);
}

/// Which rows count as realized.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldMode {
    /// An algebraically closed field of characteristic 0: all nine rows.
    ClosedChar0,
    /// Only the rows valid over every field.
    GuaranteedOnly,
    /// `F_p`: P8/P9 are kept as field dependent candidates.
    Finite(u64),
    /// `Q`: as for `Finite`.
    Rationals,
}

impl FieldMode {
    fn validate(self) -> Result<()> {
        match self {
            FieldMode::Finite(p) if !is_prime(p) => {
                Err(Error::InvalidArgument(format!("{p} is not prime")))
            }
            _ => Ok(()),
        }
    }

    fn cases(self) -> &'static [CaseId] {
        match self {
            FieldMode::GuaranteedOnly => &CaseId::ALL[..7],
            _ => &CaseId::ALL,
        }
    }
}

/// A partition together with every row and parameter tuple producing it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitClass {
    pub partition: Partition,
    #[serde(rename = "cases")]
    pub provenance: BTreeSet<CaseParams>,
    pub guaranteed: bool,
    pub field_dependent: bool,
}

impl OrbitClass {
    fn from_provenance(partition: Partition, provenance: BTreeSet<CaseParams>) -> Self {
        let guaranteed = provenance.iter().any(|c| c.id.is_guaranteed());
        OrbitClass { partition, provenance, guaranteed, field_dependent: !guaranteed }
    }

    /// The lowest numbered row producing this partition.
    pub fn first_case(&self) -> CaseId {
        self.provenance.iter().map(|c| c.id).min().expect("non-empty provenance")
    }
}

/// Outcome of [`enumerate`]: classes in decreasing lexicographic order of
/// their partitions, plus any consistency alarms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enumeration {
    pub n: usize,
    pub classes: Vec<OrbitClass>,
    pub alarms: Vec<ConsistencyAlarm>,
}

impl Enumeration {
    pub fn partitions(&self) -> BTreeSet<Partition> {
        self.classes.iter().map(|c| c.partition.clone()).collect()
    }

    pub fn get(&self, p: &Partition) -> Option<&OrbitClass> {
        self.classes.iter().find(|c| &c.partition == p)
    }

    pub fn contains(&self, p: &Partition) -> bool {
        self.get(p).is_some()
    }

    /// Rows of the table: each partition under the first row producing it.
    pub fn table_rows(&self) -> Vec<(CaseId, Vec<&Partition>)> {
        CaseId::ALL
            .iter()
            .map(|&id| {
                let parts = self
                    .classes
                    .iter()
                    .filter(|c| c.first_case() == id)
                    .map(|c| &c.partition)
                    .collect();
                (id, parts)
            })
            .collect()
    }

    /// Plain text table, one line per row: `(P1) (12), (6^2), ...`.
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        for (id, parts) in self.table_rows() {
            let body: Vec<String> = parts.iter().map(|p| p.to_exponent_string()).collect();
            if body.is_empty() {
                out.push_str(&format!("({id})\n"));
            } else {
                out.push_str(&format!("({id}) {}\n", body.join(", ")));
            }
        }
        out
    }
}

/// All classes of the requested rows.
pub fn enumerate_cases(n: usize, mode: FieldMode, cases: &[CaseId]) -> Result<Enumeration> {
    mode.validate()?;
    let mut merged: BTreeMap<Partition, BTreeSet<CaseParams>> = BTreeMap::new();
    let mut alarms = Vec::new();
    for &case in cases.iter().filter(|c| mode.cases().contains(c)) {
        let (found, mut bad) = case_partitions_checked(case, n)?;
        alarms.append(&mut bad);
        for (p, params) in found {
            merged.entry(p).or_default().insert(params);
        }
    }
    let classes = merged
        .into_iter()
        .rev()
        .map(|(p, prov)| OrbitClass::from_provenance(p, prov))
        .collect();
    Ok(Enumeration { n, classes, alarms })
}

/// Every Jordan type met by `N(B)` according to the classification.
pub fn enumerate(n: usize, mode: FieldMode) -> Result<Enumeration> {
    enumerate_cases(n, mode, &CaseId::ALL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::partitions_of;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn greek_examples() {
        let g = greek(6, 0, 3, 2).unwrap();
        assert_eq!((g.alpha_caption, g.beta_caption), (2, 0));
        let g = greek(7, 0, 4, 2).unwrap();
        assert_eq!((g.alpha_caption, g.beta_caption), (2, 1));
        assert_eq!((g.alpha_12, g.beta_12, g.gamma_12, g.delta_12), (5, 1, Some(3), Some(1)));
        let g = greek(2, 0, 1, 1).unwrap();
        assert_eq!((g.alpha_caption, g.beta_caption), (2, 0));
        assert!(greek(3, 3, 1, 1).is_err());
        assert!(greek(3, 0, 4, 1).is_err());
        assert!(greek(3, 0, 1, 0).is_err());
    }

    #[test]
    fn case_id_parsing() {
        assert_eq!("p3".parse::<CaseId>().unwrap(), CaseId::P3);
        assert!("P10".parse::<CaseId>().is_err());
    }

    #[test]
    fn row_examples() {
        let p1: BTreeSet<_> = case_partitions(CaseId::P1, 6).unwrap().into_iter().map(|x| x.0).collect();
        assert_eq!(p1.len(), 12);
        assert!(p1.contains(&p("(3^2,2^3)")));

        let p3 = case_partitions(CaseId::P3, 6).unwrap();
        let hit = p3.iter().find(|(q, _)| q == &p("5,4,3")).unwrap();
        assert_eq!((hit.1.z, hit.1.m, hit.1.l), (Some(0), Some(2), Some(3)));
        assert_eq!((hit.1.alpha, hit.1.alpha_prime), (Some(2), Some(3)));

        let p8 = case_partitions(CaseId::P8, 7).unwrap();
        let hit = p8.iter().find(|(q, _)| q == &p("(5,3^3)")).unwrap();
        assert_eq!((hit.1.z, hit.1.m, hit.1.t, hit.1.gamma_prime), (Some(0), Some(2), Some(1), Some(-2)));
    }

    #[test]
    fn small_n_is_everything() {
        for mode in [FieldMode::ClosedChar0, FieldMode::GuaranteedOnly, FieldMode::Finite(2)] {
            let e = enumerate(2, mode).unwrap();
            assert_eq!(e.partitions(), partitions_of(4).into_iter().collect());
        }
        let e = enumerate(1, FieldMode::GuaranteedOnly).unwrap();
        assert_eq!(e.partitions().len(), 2);
    }

    #[test]
    fn invariants_hold_for_small_n() {
        for n in 1..=14 {
            let e = enumerate(n, FieldMode::ClosedChar0).unwrap();
            assert!(e.alarms.is_empty(), "n={n}: {:?}", e.alarms);
            for c in &e.classes {
                assert_eq!(c.partition.sum(), 2 * n);
                assert!(!c.provenance.is_empty());
                if c.partition.len() > 1 {
                    assert!(c.partition.largest() <= n + 1, "n={n}: {}", c.partition);
                }
            }
            for s in 1..=2 * n {
                assert!(e.contains(&almost_rectangular(2 * n, s).unwrap()));
            }
            assert!(e.contains(&Partition::from_groups(&[(2, n)])));
            if n >= 2 {
                assert!(e.contains(&Partition::new([n + 1, n - 1])));
            }
        }
    }

    #[test]
    fn mode_filters_rows() {
        let all = enumerate(7, FieldMode::ClosedChar0).unwrap();
        let fin = enumerate(7, FieldMode::Finite(5)).unwrap();
        assert_eq!(all, fin);
        let g = enumerate(7, FieldMode::GuaranteedOnly).unwrap();
        assert!(!g.contains(&p("(5,3^3)")));
        let c = all.get(&p("(5,3^3)")).unwrap();
        assert!(c.field_dependent && !c.guaranteed);
        assert!(enumerate(7, FieldMode::Finite(4)).is_err());
    }

    #[test]
    fn json_shape() {
        let c = CaseParams::zml(CaseId::P3, 0, 2, Some(3));
        assert_eq!(serde_json::to_string(&c).unwrap(), r#"{"id":"P3","z":0,"m":2,"l":3}"#);
        let e = enumerate(6, FieldMode::ClosedChar0).unwrap();
        let doc = serde_json::to_string(&e.classes).unwrap();
        let back: Vec<OrbitClass> = serde_json::from_str(&doc).unwrap();
        assert_eq!(back, e.classes);
    }

    #[test]
    fn deterministic() {
        assert_eq!(enumerate(9, FieldMode::ClosedChar0).unwrap(), enumerate(9, FieldMode::ClosedChar0).unwrap());
    }
}
