//! The Oguiso-Shioda classification dataset and per-case derived data:
//! local contributions, the bounds c_max/c_min and their difference, the
//! minimal norm, and the integer quadratic form Q_X.

use crate::error::{Error, Result};
use crate::lattice::{realize, Lattice, LatticeBlock, LatticeExpr};
use crate::rational::{parse_rational, rat};
use crate::{Int, Rational, RationalMatrix};
use num_traits::{Signed, Zero};

/// Source tag carried by a dataset row: rows whose values are reproduced
/// in the primary tables, and rows transcribed from the full
/// classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Paper,
    OguisoShioda,
}

/// One row of the classification: the fiber lattice T, the Mordell-Weil
/// lattice (free part), the narrow lattice, and the torsion group.
#[derive(Debug, Clone)]
pub struct MWCase {
    pub case_no: usize,
    pub t_blocks: Vec<LatticeBlock>,
    pub mw_free: Lattice,
    pub mw_narrow: Lattice,
    /// Cyclic orders of the torsion summands; empty means torsion-free.
    pub torsion: Vec<u32>,
    pub rank: usize,
    pub provenance: Provenance,
}

impl MWCase {
    pub fn t_expr(&self) -> LatticeExpr {
        LatticeExpr::new(self.t_blocks.clone())
    }

    pub fn t_name(&self) -> String {
        if self.t_blocks.is_empty() {
            return "0".into();
        }
        self.t_blocks
            .iter()
            .map(|b| match b {
                LatticeBlock::A(n) => format!("A{n}"),
                LatticeBlock::D(n) => format!("D{n}"),
                LatticeBlock::E(n) => format!("E{n}"),
                _ => "?".into(),
            })
            .collect::<Vec<_>>()
            .join("+")
    }

    pub fn has_torsion(&self) -> bool {
        !self.torsion.is_empty()
    }

    /// det E(K)^0, always a positive integer.
    pub fn narrow_det(&self) -> Int {
        self.mw_narrow.determinant().to_integer()
    }
}

/// Local contribution contr_v(P) (j = None) or contr_v(P, Q) (j = Some)
/// when the sections meet the fiber with block `tv` at components i and j.
/// Index 0 is the neutral component. For D-blocks the indices follow the
/// component table: 1 is the near simple component, 2 and 3 the far ones.
pub fn contribution(tv: &LatticeBlock, i: usize, j: Option<usize>) -> Result<Rational> {
    let j_val = j.unwrap_or(i);
    if j.is_some() && i > j_val {
        return Err(Error::domain("contribution indices need i <= j"));
    }
    if i == 0 || j_val == 0 {
        return Ok(Rational::zero());
    }
    match tv {
        LatticeBlock::A(r) => {
            // A_{n-1} from a fiber with n components in a cycle
            let n = r + 1;
            if i >= n || j_val >= n {
                return Err(Error::domain(format!(
                    "component index out of range for A{r}"
                )));
            }
            Ok(rat((i * (n - j_val)) as i64, n as i64))
        }
        LatticeBlock::D(m) => {
            // D_{n+4}: simple components are 1 (near) and 2, 3 (far)
            let n = (m - 4) as i64;
            if i > 3 || j_val > 3 {
                return Err(Error::domain(format!(
                    "sections meet only the simple components 0..3 of D{m}"
                )));
            }
            if i == j_val {
                Ok(if i == 1 {
                    rat(1, 1)
                } else {
                    rat(1, 1) + rat(n, 4)
                })
            } else if i == 1 {
                Ok(rat(1, 2))
            } else {
                Ok(rat(1, 2) + rat(n, 4))
            }
        }
        LatticeBlock::E(6) => {
            if i > 2 || j_val > 2 {
                return Err(Error::domain("E6 has simple components 0..2"));
            }
            Ok(if i == j_val { rat(4, 3) } else { rat(2, 3) })
        }
        LatticeBlock::E(7) => {
            if i > 1 || j_val > 1 {
                return Err(Error::domain("E7 has simple components 0..1"));
            }
            Ok(rat(3, 2))
        }
        LatticeBlock::E(8) => Err(Error::domain(
            "a II* fiber has no non-neutral simple component",
        )),
        _ => Err(Error::domain("contributions are defined for ADE blocks")),
    }
}

/// (max contribution, minimal positive contribution) of a reducible block.
pub fn extreme_contributions(tv: &LatticeBlock) -> Result<(Rational, Rational)> {
    match tv {
        LatticeBlock::A(r) => {
            let n = (r + 1) as i64;
            let l = n / 2;
            Ok((rat(l * (n - l), n), rat(n - 1, n)))
        }
        LatticeBlock::D(m) => {
            let n = (m - 4) as i64;
            Ok((rat(1, 1) + rat(n, 4), rat(1, 1)))
        }
        LatticeBlock::E(6) => Ok((rat(4, 3), rat(4, 3))),
        LatticeBlock::E(7) => Ok((rat(3, 2), rat(3, 2))),
        LatticeBlock::E(8) => Err(Error::domain("a II* fiber has no nonzero contributions")),
        _ => Err(Error::domain("extreme contributions need an ADE block")),
    }
}

/// (c_max, c_min, Delta) of a case. By convention all three are 0 when the
/// surface has no reducible fiber.
pub fn bounds(case: &MWCase) -> Result<(Rational, Rational, Rational)> {
    bounds_of_blocks(&case.t_blocks)
}

/// Bounds computed from any list of reducible-fiber blocks.
pub fn bounds_of_blocks(blocks: &[LatticeBlock]) -> Result<(Rational, Rational, Rational)> {
    if blocks.is_empty() {
        return Ok((Rational::zero(), Rational::zero(), Rational::zero()));
    }
    let mut c_max = Rational::zero();
    let mut c_min: Option<Rational> = None;
    for b in blocks {
        let (mx, mn) = extreme_contributions(b)?;
        c_max += mx;
        c_min = Some(match c_min {
            Some(cur) if cur <= mn => cur,
            _ => mn,
        });
    }
    let c_min = c_min.expect("nonempty block list");
    let delta = c_max.clone() - c_min.clone();
    Ok((c_max, c_min, delta))
}

/// Minimal norm mu = min { h(P) > 0 }.
pub fn minimal_norm(case: &MWCase) -> Result<Rational> {
    if case.rank == 0 {
        return Err(Error::domain("minimal norm needs rank >= 1"));
    }
    case.mw_free.minimal_norm()
}

/// The integer matrix of Q_X = (det E(K)^0) * h, i.e. the adjugate of the
/// narrow Gram matrix.
pub fn qx_form(case: &MWCase) -> Result<RationalMatrix> {
    if case.rank == 0 {
        return Err(Error::domain("Q_X needs rank >= 1"));
    }
    // duality precondition: the free part is the dual of the narrow lattice
    let inv = case.mw_narrow.gram().inverse()?;
    if &inv != case.mw_free.gram() {
        return Err(Error::DataIntegrity(format!(
            "case {}: free Gram is not the inverse of the narrow Gram",
            case.case_no
        )));
    }
    let adj = case.mw_narrow.gram().adjugate()?;
    for i in 0..adj.rows() {
        for j in 0..adj.cols() {
            if !adj[(i, j)].is_integer() {
                return Err(Error::DataIntegrity(format!(
                    "case {}: Q_X has a non-integer entry",
                    case.case_no
                )));
            }
        }
    }
    Ok(adj)
}

/// The classification dataset (rows with rank >= 1).
#[derive(Debug, Clone)]
pub struct Dataset {
    cases: Vec<MWCase>,
}

const EMBEDDED: &str = include_str!("../data/oguiso_shioda.json");

impl Dataset {
    /// The dataset shipped with the crate.
    pub fn embedded() -> Result<Dataset> {
        Self::from_json_str(EMBEDDED)
    }

    pub fn from_path(path: &std::path::Path) -> Result<Dataset> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::DataIntegrity(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json_str(&text)
    }

    pub fn from_json_str(text: &str) -> Result<Dataset> {
        let value: serde_json::Value = serde_json::from_str(text)
            .map_err(|e| Error::DataIntegrity(format!("dataset is not valid JSON: {e}")))?;
        let rows = value
            .get("cases")
            .and_then(|c| c.as_array())
            .ok_or_else(|| Error::DataIntegrity("dataset missing \"cases\" array".into()))?;
        let mut cases = Vec::with_capacity(rows.len());
        for (idx, row) in rows.iter().enumerate() {
            let case = parse_case(row)
                .map_err(|e| Error::DataIntegrity(format!("row {}: {e}", idx + 1)))?;
            validate_case(&case)
                .map_err(|e| Error::DataIntegrity(format!("row {}: {e}", idx + 1)))?;
            cases.push(case);
        }
        let mut seen = std::collections::BTreeSet::new();
        for c in &cases {
            if !seen.insert(c.case_no) {
                return Err(Error::DataIntegrity(format!(
                    "duplicate case {}",
                    c.case_no
                )));
            }
        }
        Ok(Dataset { cases })
    }

    pub fn cases(&self) -> &[MWCase] {
        &self.cases
    }

    pub fn get(&self, case_no: usize) -> Result<&MWCase> {
        self.cases
            .iter()
            .find(|c| c.case_no == case_no)
            .ok_or_else(|| Error::domain(format!("no case {case_no} in the dataset")))
    }
}

fn parse_case(row: &serde_json::Value) -> Result<MWCase> {
    let get = |key: &str| {
        row.get(key)
            .ok_or_else(|| Error::DataIntegrity(format!("missing field {key}")))
    };
    let case_no = get("case")?
        .as_u64()
        .ok_or_else(|| Error::DataIntegrity("case must be a number".into()))?
        as usize;
    let t_blocks: Result<Vec<LatticeBlock>> = get("T")?
        .as_array()
        .ok_or_else(|| Error::DataIntegrity("T must be a list".into()))?
        .iter()
        .map(|v| {
            let s = v
                .as_str()
                .ok_or_else(|| Error::DataIntegrity("T entries must be strings".into()))?;
            parse_block(s)
        })
        .collect();
    let mw_free = parse_gram(get("EK_free")?)?;
    let mw_narrow = parse_gram(get("EK_narrow")?)?;
    let torsion: Result<Vec<u32>> = get("torsion")?
        .as_array()
        .ok_or_else(|| Error::DataIntegrity("torsion must be a list".into()))?
        .iter()
        .map(|v| {
            v.as_u64()
                .filter(|&n| n >= 2)
                .map(|n| n as u32)
                .ok_or_else(|| Error::DataIntegrity("torsion orders must be integers >= 2".into()))
        })
        .collect();
    let rank = get("rank")?
        .as_u64()
        .ok_or_else(|| Error::DataIntegrity("rank must be a number".into()))?
        as usize;
    let provenance = match get("provenance")?.as_str() {
        Some("PAPER") => Provenance::Paper,
        Some("OS") => Provenance::OguisoShioda,
        _ => {
            return Err(Error::DataIntegrity(
                "provenance must be PAPER or OS".into(),
            ))
        }
    };
    Ok(MWCase {
        case_no,
        t_blocks: t_blocks?,
        mw_free: Lattice::from_gram(mw_free)?,
        mw_narrow: Lattice::from_gram(mw_narrow)?,
        torsion: torsion?,
        rank,
        provenance,
    })
}

fn parse_block(s: &str) -> Result<LatticeBlock> {
    if s.len() < 2 {
        return Err(Error::DataIntegrity(format!("bad block name {s:?}")));
    }
    let (kind, num) = s.split_at(1);
    let n: usize = num
        .parse()
        .map_err(|_| Error::DataIntegrity(format!("bad block name {s:?}")))?;
    match kind {
        "A" => Ok(LatticeBlock::A(n)),
        "D" => Ok(LatticeBlock::D(n)),
        "E" => Ok(LatticeBlock::E(n)),
        _ => Err(Error::DataIntegrity(format!("bad block name {s:?}"))),
    }
}

fn parse_gram(v: &serde_json::Value) -> Result<RationalMatrix> {
    let rows = v
        .get("gram")
        .and_then(|g| g.as_array())
        .ok_or_else(|| Error::DataIntegrity("lattice needs a \"gram\" matrix".into()))?;
    let mut out = Vec::with_capacity(rows.len());
    for r in rows {
        let cells = r
            .as_array()
            .ok_or_else(|| Error::DataIntegrity("gram rows must be lists".into()))?;
        let parsed: Result<Vec<Rational>> = cells
            .iter()
            .map(|c| match c {
                serde_json::Value::String(s) => parse_rational(s),
                serde_json::Value::Number(n) => parse_rational(&n.to_string()),
                _ => Err(Error::DataIntegrity(
                    "gram entries must be rationals".into(),
                )),
            })
            .collect();
        out.push(parsed?);
    }
    RationalMatrix::from_rows(out)
}

fn validate_case(case: &MWCase) -> Result<()> {
    if case.rank != case.mw_free.rank() || case.rank != case.mw_narrow.rank() {
        return Err(Error::DataIntegrity(format!(
            "case {}: rank {} does not match the lattice ranks",
            case.case_no, case.rank
        )));
    }
    let t_rank: usize = case.t_blocks.iter().map(LatticeBlock::rank).sum();
    if case.rank + t_rank > 8 {
        return Err(Error::DataIntegrity(format!(
            "case {}: rank + rank(T) = {} exceeds 8",
            case.case_no,
            case.rank + t_rank
        )));
    }
    // T itself must be realizable (positive-definite in our convention)
    realize(&case.t_expr())?;
    // narrow lattice: even and integral with positive integer determinant
    let g = case.mw_narrow.gram();
    for i in 0..g.rows() {
        if !(g[(i, i)].clone() / rat(2, 1)).is_integer() {
            return Err(Error::DataIntegrity(format!(
                "case {}: narrow lattice has an odd diagonal entry",
                case.case_no
            )));
        }
        for j in 0..g.cols() {
            if !g[(i, j)].is_integer() {
                return Err(Error::DataIntegrity(format!(
                    "case {}: narrow Gram is not integral",
                    case.case_no
                )));
            }
        }
    }
    let det = case.mw_narrow.determinant();
    if !det.is_integer() || !det.is_positive() {
        return Err(Error::DataIntegrity(format!(
            "case {}: narrow determinant {det} is not a positive integer",
            case.case_no
        )));
    }
    // the free part is the dual of the narrow lattice
    if case.rank >= 1 && &case.mw_narrow.gram().inverse()? != case.mw_free.gram() {
        return Err(Error::DataIntegrity(format!(
            "case {}: free Gram is not the inverse of the narrow Gram",
            case.case_no
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dataset() -> Dataset {
        Dataset::embedded().unwrap()
    }

    #[test]
    fn dataset_loads_with_61_rows() {
        let d = dataset();
        assert_eq!(d.cases().len(), 61);
        assert_eq!(d.cases().iter().filter(|c| c.rank >= 1).count(), 61);
        for (i, c) in d.cases().iter().enumerate() {
            assert_eq!(c.case_no, i + 1);
        }
    }

    #[test]
    fn quoted_rows_match_the_tables() {
        let d = dataset();
        let c53 = d.get(53).unwrap();
        assert_eq!(c53.t_name(), "A5+A1+A1");
        assert_eq!(c53.mw_free.gram()[(0, 0)], rat(1, 6));
        assert_eq!(c53.torsion, vec![2]);

        let c59 = d.get(59).unwrap();
        assert_eq!(c59.t_name(), "A3+A2+A1+A1");
        assert_eq!(c59.mw_free.gram()[(0, 0)], rat(1, 12));
        assert_eq!(c59.mw_narrow.gram()[(0, 0)], rat(12, 1));
        assert_eq!(c59.torsion, vec![2]);

        let c27 = d.get(27).unwrap();
        assert_eq!(c27.t_name(), "E6");
        assert_eq!(minimal_norm(c27).unwrap(), rat(2, 3));
    }

    #[test]
    fn contribution_table_values() {
        use LatticeBlock::{A, D, E};
        // A3 block from an I4 fiber, component 2: 2*2/4
        assert_eq!(contribution(&A(3), 2, None).unwrap(), rat(1, 1));
        assert_eq!(contribution(&E(7), 1, None).unwrap(), rat(3, 2));
        assert_eq!(contribution(&A(4), 0, None).unwrap(), rat(0, 1));
        assert_eq!(contribution(&D(6), 1, None).unwrap(), rat(1, 1));
        assert_eq!(contribution(&D(6), 2, None).unwrap(), rat(3, 2));
        assert_eq!(contribution(&D(6), 1, Some(2)).unwrap(), rat(1, 2));
        assert_eq!(contribution(&D(6), 2, Some(3)).unwrap(), rat(1, 1));
        assert_eq!(contribution(&E(6), 1, Some(2)).unwrap(), rat(2, 3));
        assert_eq!(contribution(&A(3), 1, Some(3)).unwrap(), rat(1, 4));
        assert!(contribution(&A(3), 3, Some(1)).is_err(), "needs i <= j");
        assert!(contribution(&A(3), 4, None).is_err(), "index out of range");
        assert!(contribution(&E(7), 1, Some(2)).is_err());
    }

    #[test]
    fn extreme_contribution_values() {
        use LatticeBlock::{A, D, E};
        assert_eq!(
            extreme_contributions(&A(2)).unwrap(),
            (rat(2, 3), rat(2, 3))
        );
        assert_eq!(
            extreme_contributions(&D(4)).unwrap(),
            (rat(1, 1), rat(1, 1))
        );
        assert_eq!(
            extreme_contributions(&A(6)).unwrap(),
            (rat(12, 7), rat(6, 7))
        );
        assert_eq!(
            extreme_contributions(&E(6)).unwrap(),
            (rat(4, 3), rat(4, 3))
        );
        assert_eq!(
            extreme_contributions(&E(7)).unwrap(),
            (rat(3, 2), rat(3, 2))
        );
        assert!(extreme_contributions(&E(8)).is_err());
    }

    #[test]
    fn bounds_worked_example() {
        use LatticeBlock::A;
        let (c_max, c_min, _) = bounds_of_blocks(&[A(3), A(2), A(1)]).unwrap();
        assert_eq!(c_max, rat(13, 6));
        assert_eq!(c_min, rat(1, 2));
    }

    #[test]
    fn bounds_delta_tables() {
        let d = dataset();
        // Delta = 2 exactly on these six rows
        for (no, cmax) in [
            (24, rat(5, 2)),
            (38, rat(5, 2)),
            (53, rat(5, 2)),
            (57, rat(5, 2)),
            (58, rat(5, 2)),
            (61, rat(5, 2)),
        ] {
            let (c_max, c_min, delta) = bounds(d.get(no).unwrap()).unwrap();
            assert_eq!(c_max, cmax, "case {no}");
            assert_eq!(c_min, rat(1, 2), "case {no}");
            assert_eq!(delta, rat(2, 1), "case {no}");
        }
        for (no, cmax, delta) in [
            (41, rat(8, 3), rat(13, 6)),
            (42, rat(3, 1), rat(5, 2)),
            (59, rat(8, 3), rat(13, 6)),
            (60, rat(3, 1), rat(5, 2)),
        ] {
            let (c_max, c_min, dl) = bounds(d.get(no).unwrap()).unwrap();
            assert_eq!(c_max, cmax, "case {no}");
            assert_eq!(c_min, rat(1, 2), "case {no}");
            assert_eq!(dl, delta, "case {no}");
        }
        // and nowhere else among rank >= 1 rows
        for c in d.cases() {
            let (_, c_min, delta) = bounds(c).unwrap();
            let listed = [24, 38, 53, 57, 58, 61, 41, 42, 59, 60].contains(&c.case_no);
            assert_eq!(delta >= rat(2, 1), listed, "case {}", c.case_no);
            if listed {
                assert!(
                    c.has_torsion(),
                    "case {}: Delta >= 2 forces torsion",
                    c.case_no
                );
            }
            if !c.t_blocks.is_empty() {
                assert!(c_min.is_positive());
            }
        }
    }

    #[test]
    fn c_max_below_4_everywhere() {
        let d = dataset();
        for c in d.cases() {
            let (c_max, _, _) = bounds(c).unwrap();
            assert!(c_max < rat(4, 1), "case {}", c.case_no);
        }
    }

    #[test]
    fn minimal_norms_quoted() {
        let d = dataset();
        assert_eq!(minimal_norm(d.get(43).unwrap()).unwrap(), rat(1, 2));
        assert_eq!(minimal_norm(d.get(55).unwrap()).unwrap(), rat(1, 20));
        assert_eq!(minimal_norm(d.get(20).unwrap()).unwrap(), rat(1, 6));
    }

    #[test]
    fn qx_is_integral_and_satisfies_the_adjugate_law() {
        let d = dataset();
        for c in d.cases() {
            let q = qx_form(c).unwrap();
            let det = c.mw_narrow.determinant();
            let prod = c.mw_narrow.gram().mul(&q).unwrap();
            assert_eq!(
                prod,
                RationalMatrix::identity(c.rank).scale(&det),
                "case {}",
                c.case_no
            );
        }
        // rank-1 sample: narrow <2> gives Q_X = [1]
        let q43 = qx_form(d.get(43).unwrap()).unwrap();
        assert_eq!(q43[(0, 0)], rat(1, 1));
    }

    #[test]
    fn loader_rejects_broken_rows() {
        // free gram not the inverse of the narrow gram
        let bad = r#"{"version":1,"cases":[
            {"case":1,"T":["A1"],"EK_free":{"gram":[["1"]]},"EK_narrow":{"gram":[["4"]]},
             "torsion":[],"rank":1,"provenance":"OS"}]}"#;
        assert!(matches!(
            Dataset::from_json_str(bad),
            Err(Error::DataIntegrity(_))
        ));

        // odd diagonal in the narrow lattice
        let bad = r#"{"version":1,"cases":[
            {"case":1,"T":["A1"],"EK_free":{"gram":[["1/3"]]},"EK_narrow":{"gram":[["3"]]},
             "torsion":[],"rank":1,"provenance":"OS"}]}"#;
        assert!(matches!(
            Dataset::from_json_str(bad),
            Err(Error::DataIntegrity(_))
        ));
    }
}
