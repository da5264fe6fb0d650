//! Long Weierstrass models over Q(t) and local fiber-type identification
//! from valuations of the coefficients.

use crate::error::{Error, Result};
use crate::kodaira::{FiberConfiguration, FiberType};
use crate::poly::PolyQ;
use crate::rational::{parse_rational, rat};
use crate::Rational;
use num_traits::Zero;

/// A place of P^1 over Q: a rational point t = c, or the point at infinity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Place {
    Finite(Rational),
    Infinity,
}

impl std::fmt::Display for Place {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Place::Finite(c) => write!(f, "t={c}"),
            Place::Infinity => write!(f, "t=inf"),
        }
    }
}

impl Place {
    /// Accepts "inf" (with unicode alias) or a rational like "-3/2".
    pub fn parse(s: &str) -> Result<Place> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s == "\u{221e}" {
            return Ok(Place::Infinity);
        }
        Ok(Place::Finite(parse_rational(s)?))
    }
}

/// y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x + a6 with a_i in Q\[t\],
/// deg a_i <= i (the rationality bound).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeierstrassModel {
    pub a1: PolyQ,
    pub a2: PolyQ,
    pub a3: PolyQ,
    pub a4: PolyQ,
    pub a6: PolyQ,
}

/// Homogeneous degree caps of (a1, a2, a3, a4, a6).
const CAPS: [usize; 5] = [1, 2, 3, 4, 6];

impl WeierstrassModel {
    pub fn new(a1: PolyQ, a2: PolyQ, a3: PolyQ, a4: PolyQ, a6: PolyQ) -> Result<Self> {
        let w = WeierstrassModel { a1, a2, a3, a4, a6 };
        for (p, cap) in w.coefficients().into_iter().zip(CAPS) {
            if p.degree().is_some_and(|d| d > cap) {
                return Err(Error::domain(format!(
                    "deg a_{cap} = {} exceeds the rationality bound {cap}",
                    p.degree().unwrap()
                )));
            }
        }
        if w.discriminant_unchecked().is_zero() {
            return Err(Error::SingularSurface);
        }
        Ok(w)
    }

    fn coefficients(&self) -> [&PolyQ; 5] {
        [&self.a1, &self.a2, &self.a3, &self.a4, &self.a6]
    }

    /// b2, b4, b6, b8.
    pub fn b_invariants(&self) -> (PolyQ, PolyQ, PolyQ, PolyQ) {
        let (a1, a2, a3, a4, a6) = (&self.a1, &self.a2, &self.a3, &self.a4, &self.a6);
        let two = |p: &PolyQ| p.scale(&rat(2, 1));
        let four = |p: &PolyQ| p.scale(&rat(4, 1));
        let b2 = a1.clone() * a1.clone() + four(a2);
        let b4 = a1.clone() * a3.clone() + two(a4);
        let b6 = a3.clone() * a3.clone() + four(a6);
        let b8 = a1.clone() * a1.clone() * a6.clone() - a1.clone() * a3.clone() * a4.clone()
            + four(&(a2.clone() * a6.clone()))
            + a2.clone() * a3.clone() * a3.clone()
            - a4.clone() * a4.clone();
        (b2, b4, b6, b8)
    }

    fn discriminant_unchecked(&self) -> PolyQ {
        let (b2, b4, b6, b8) = self.b_invariants();
        -(b2.clone() * b2.clone() * b8)
            - (b4.clone() * b4.clone() * b4.clone()).scale(&rat(8, 1))
            - (b6.clone() * b6.clone()).scale(&rat(27, 1))
            + (b2 * b4 * b6).scale(&rat(9, 1))
    }

    /// Discriminant of the model; the constructor guarantees it is nonzero.
    pub fn discriminant(&self) -> PolyQ {
        self.discriminant_unchecked()
    }

    /// Discriminant of the cubic x^3 + a2 x^2 + a4 x + a6 as a polynomial in t.
    pub fn cubic_disc(&self) -> PolyQ {
        let (a, b, c) = (&self.a2, &self.a4, &self.a6);
        (a.clone() * b.clone() * c.clone()).scale(&rat(18, 1))
            - (a.clone() * a.clone() * a.clone() * c.clone()).scale(&rat(4, 1))
            + a.clone() * a.clone() * b.clone() * b.clone()
            - (b.clone() * b.clone() * b.clone()).scale(&rat(4, 1))
            - (c.clone() * c.clone()).scale(&rat(27, 1))
    }

    /// The model in the chart at infinity (all coefficients reversed within
    /// their homogeneous caps). An involution.
    pub fn flip(&self) -> Result<WeierstrassModel> {
        Ok(WeierstrassModel {
            a1: self.a1.flip(1)?,
            a2: self.a2.flip(2)?,
            a3: self.a3.flip(3)?,
            a4: self.a4.flip(4)?,
            a6: self.a6.flip(6)?,
        })
    }
}

/// Exact valuation of `p` at a place. At infinity the valuation is
/// `cap - deg p` where `cap` is the homogeneous degree of the quantity
/// (i for a_i, 12 for the discriminant). `None` encodes +infinity.
pub fn valuation(p: &PolyQ, v: &Place, infinity_cap: usize) -> Result<Option<usize>> {
    match v {
        Place::Finite(c) => Ok(p.valuation_at(c)),
        Place::Infinity => match p.degree() {
            None => Ok(None),
            Some(d) if d > infinity_cap => Err(Error::domain(format!(
                "degree {d} exceeds the homogeneous cap {infinity_cap}"
            ))),
            Some(d) => Ok(Some(infinity_cap - d)),
        },
    }
}

/// Rescale x -> u^2 x, y -> u^3 y at `v` until min_i v(a_i)/i < 1.
pub fn minimize_at(w: &WeierstrassModel, v: &Place) -> Result<WeierstrassModel> {
    match v {
        Place::Finite(c) => {
            let mut cur = w.clone();
            loop {
                let vals: Vec<Option<usize>> = cur
                    .coefficients()
                    .iter()
                    .map(|p| p.valuation_at(c))
                    .collect();
                let reducible = vals
                    .iter()
                    .zip(CAPS)
                    .all(|(val, i)| val.is_none_or(|x| x >= i));
                if !reducible {
                    return Ok(cur);
                }
                let uniformizer = PolyQ::new(vec![-c.clone(), rat(1, 1)]);
                let divide = |p: &PolyQ, i: usize| -> PolyQ {
                    if p.is_zero() {
                        return PolyQ::zero();
                    }
                    let (q, r) = p.div_rem(&uniformizer.pow(i)).expect("nonzero");
                    debug_assert!(r.is_zero());
                    q
                };
                cur = WeierstrassModel {
                    a1: divide(&cur.a1, 1),
                    a2: divide(&cur.a2, 2),
                    a3: divide(&cur.a3, 3),
                    a4: divide(&cur.a4, 4),
                    a6: divide(&cur.a6, 6),
                };
            }
        }
        Place::Infinity => {
            let flipped = minimize_at(&w.flip()?, &Place::Finite(Rational::zero()))?;
            flipped.flip()
        }
    }
}

/// Identify the fiber type at `v` by the valuation table. The model must be
/// minimal at `v` (use [`minimize_at`] first).
pub fn classify_fiber(w: &WeierstrassModel, v: &Place) -> Result<FiberType> {
    match v {
        Place::Infinity => classify_local(&w.flip()?, &Rational::zero()),
        Place::Finite(c) => classify_local(w, c),
    }
}

fn classify_local(w: &WeierstrassModel, c: &Rational) -> Result<FiberType> {
    let delta = w.discriminant();
    let v_delta = delta
        .valuation_at(c)
        .expect("nonzero discriminant has finite valuation");
    if v_delta == 0 {
        return Ok(FiberType::I(0));
    }
    // min over nonzero coefficients of v(a_i)/i
    let ratio = w
        .coefficients()
        .iter()
        .zip(CAPS)
        .filter_map(|(p, i)| p.valuation_at(c).map(|val| rat(val as i64, i as i64)))
        .min();
    let ratio =
        ratio.ok_or_else(|| Error::Classification("all coefficients vanish identically".into()))?;
    if ratio.is_zero() {
        return Ok(FiberType::I(v_delta));
    }
    let v_of = |p: &PolyQ| p.valuation_at(c);
    let (_, _, b6, _) = w.b_invariants();
    let table_err = |what: &str| {
        Error::Classification(format!(
            "no table row matches (min v(a_i)/i = {ratio}, {what}); \
             non-minimal model or residue-characteristic pathology"
        ))
    };
    if ratio == rat(1, 6) {
        Ok(FiberType::II)
    } else if ratio == rat(1, 4) {
        Ok(FiberType::III)
    } else if ratio == rat(1, 3) {
        if v_of(&b6) == Some(2) {
            Ok(FiberType::IV)
        } else {
            Err(table_err("v(b6) != 2"))
        }
    } else if ratio == rat(1, 2) {
        let d = w.cubic_disc();
        match v_of(&d) {
            Some(6) => Ok(FiberType::IStar(0)),
            vd if vd.is_none_or(|x| x > 6) => {
                let three_a4 = w.a4.scale(&rat(3, 1));
                let q = w.a2.clone() * w.a2.clone() - three_a4;
                if v_of(&q) == Some(2) {
                    if v_delta < 6 {
                        return Err(table_err("v(disc) < 6 in the I_n^* row"));
                    }
                    Ok(FiberType::IStar(v_delta - 6))
                } else {
                    Err(table_err("v(a2^2 - 3 a4) != 2"))
                }
            }
            _ => Err(table_err("v(d) < 6")),
        }
    } else if ratio == rat(2, 3) {
        if v_of(&b6) == Some(4) {
            Ok(FiberType::IVStar)
        } else {
            Err(table_err("v(b6) != 4"))
        }
    } else if ratio == rat(3, 4) {
        Ok(FiberType::IIIStar)
    } else if ratio == rat(5, 6) {
        Ok(FiberType::IIStar)
    } else {
        Err(table_err("minimum not in the table"))
    }
}

/// Classify the fibers at the supplied places. Every rational root of the
/// discriminant with multiplicity >= 2 must be covered by `places`; omitted
/// simple roots each contribute an I1 fiber, certified by an exact
/// squarefreeness check on the uncovered factor.
pub fn classify_surface(w: &WeierstrassModel, places: &[Place]) -> Result<FiberConfiguration> {
    let mut fibers = Vec::new();
    for v in places {
        let minimal = minimize_at(w, v)?;
        fibers.push(classify_fiber(&minimal, v)?);
    }

    // coverage of the finite part of the discriminant
    let mut residual = w.discriminant();
    for v in places {
        if let Place::Finite(c) = v {
            if let Some(mult) = residual.valuation_at(c).filter(|&m| m > 0) {
                let lin = PolyQ::new(vec![-c.clone(), rat(1, 1)]);
                let (q, _) = residual.div_rem(&lin.pow(mult))?;
                residual = q;
            }
        }
    }
    if residual.degree().is_some_and(|d| d > 0) {
        let sq = residual.gcd(&residual.derivative());
        if sq.degree().is_some_and(|d| d > 0) {
            return Err(Error::IncompletePlaces(format!(
                "the uncovered discriminant factor has a multiple root \
                 (gcd with derivative has degree {})",
                sq.degree().unwrap()
            )));
        }
        // each uncovered simple root is an I1 fiber
        for _ in 0..residual.degree().unwrap() {
            fibers.push(FiberType::I(1));
        }
    }

    // coverage at infinity
    if !places.contains(&Place::Infinity) {
        let at_inf = minimize_at(w, &Place::Infinity)?;
        let v_inf =
            valuation(&at_inf.discriminant(), &Place::Infinity, 12)?.expect("nonzero discriminant");
        match v_inf {
            0 => {}
            1 => fibers.push(FiberType::I(1)),
            m => {
                return Err(Error::IncompletePlaces(format!(
                    "the place at infinity carries v(disc) = {m} but was not supplied"
                )))
            }
        }
    }

    FiberConfiguration::new(fibers, None)
}

/// Parse the JSON wire format
/// `{"a1":[...],"a2":[...],"a3":[...],"a4":[...],"a6":[...]}` with
/// coefficient lists of rationals as "p/q" strings, ascending degree.
pub fn model_from_json(value: &serde_json::Value) -> Result<WeierstrassModel> {
    let obj = value
        .as_object()
        .ok_or_else(|| Error::domain("model JSON must be an object"))?;
    let poly = |key: &str| -> Result<PolyQ> {
        match obj.get(key) {
            None => Ok(PolyQ::zero()),
            Some(serde_json::Value::Array(items)) => {
                let coeffs: Result<Vec<Rational>> = items
                    .iter()
                    .map(|it| match it {
                        serde_json::Value::String(s) => parse_rational(s),
                        serde_json::Value::Number(n) => parse_rational(&n.to_string()),
                        _ => Err(Error::domain(format!("bad coefficient in {key}"))),
                    })
                    .collect();
                Ok(PolyQ::new(coeffs?))
            }
            Some(_) => Err(Error::domain(format!("{key} must be a coefficient list"))),
        }
    };
    WeierstrassModel::new(
        poly("a1")?,
        poly("a2")?,
        poly("a3")?,
        poly("a4")?,
        poly("a6")?,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kodaira::FiberType::*;

    /// y^2 = x^3 + a6(t)
    fn cubic_plus(a6: PolyQ) -> WeierstrassModel {
        WeierstrassModel::new(
            PolyQ::zero(),
            PolyQ::zero(),
            PolyQ::zero(),
            PolyQ::zero(),
            a6,
        )
        .unwrap()
    }

    fn t_power(k: usize) -> PolyQ {
        let mut coeffs = vec![rat(0, 1); k];
        coeffs.push(rat(1, 1));
        PolyQ::new(coeffs)
    }

    #[test]
    fn b_invariants_examples() {
        let w = cubic_plus(PolyQ::var());
        let (b2, b4, b6, b8) = w.b_invariants();
        assert!(b2.is_zero() && b4.is_zero() && b8.is_zero());
        assert_eq!(b6, PolyQ::var().scale(&rat(4, 1)));

        let w = WeierstrassModel::new(
            PolyQ::from_ints(&[1]),
            PolyQ::zero(),
            PolyQ::zero(),
            PolyQ::from_ints(&[1]),
            PolyQ::zero(),
        )
        .unwrap();
        let (b2, b4, b6, b8) = w.b_invariants();
        assert_eq!(b2, PolyQ::from_ints(&[1]));
        assert_eq!(b4, PolyQ::from_ints(&[2]));
        assert!(b6.is_zero());
        assert_eq!(b8, PolyQ::from_ints(&[-1]));
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(
            cubic_plus(PolyQ::var()).discriminant(),
            PolyQ::new(vec![rat(0, 1), rat(0, 1), rat(-432, 1)])
        );
        let w = WeierstrassModel::new(
            PolyQ::zero(),
            PolyQ::zero(),
            PolyQ::zero(),
            PolyQ::from_ints(&[1]),
            PolyQ::zero(),
        )
        .unwrap();
        assert_eq!(w.discriminant(), PolyQ::from_ints(&[-64]));
        // y^2 = x^3 is everywhere singular
        assert!(matches!(
            WeierstrassModel::new(
                PolyQ::zero(),
                PolyQ::zero(),
                PolyQ::zero(),
                PolyQ::zero(),
                PolyQ::zero()
            ),
            Err(Error::SingularSurface)
        ));
    }

    #[test]
    fn degree_bound_is_enforced() {
        let too_big = PolyQ::from_ints(&[0, 0, 1]); // deg 2 > cap 1
        assert!(WeierstrassModel::new(
            too_big,
            PolyQ::zero(),
            PolyQ::zero(),
            PolyQ::zero(),
            PolyQ::from_ints(&[1])
        )
        .is_err());
    }

    #[test]
    fn valuation_examples() {
        let p = PolyQ::from_ints(&[0, 0, -1, 1]); // t^2(t-1)
        assert_eq!(
            valuation(&p, &Place::Finite(rat(0, 1)), 0).unwrap(),
            Some(2)
        );
        assert_eq!(
            valuation(&PolyQ::var(), &Place::Infinity, 6).unwrap(),
            Some(5)
        );
        assert_eq!(
            valuation(&PolyQ::zero(), &Place::Finite(rat(3, 1)), 0).unwrap(),
            None
        );
        assert!(valuation(&PolyQ::from_ints(&[0, 0, 1]), &Place::Infinity, 1).is_err());
    }

    #[test]
    fn minimize_examples() {
        let w = cubic_plus(t_power(6));
        let min = minimize_at(&w, &Place::Finite(rat(0, 1))).unwrap();
        assert_eq!(min.a6, PolyQ::from_ints(&[1]));

        let w = cubic_plus(PolyQ::var());
        assert_eq!(
            minimize_at(&w, &Place::Finite(rat(0, 1))).unwrap(),
            w,
            "fixpoint"
        );

        let w = WeierstrassModel::new(
            PolyQ::zero(),
            PolyQ::zero(),
            PolyQ::zero(),
            t_power(4),
            t_power(6),
        )
        .unwrap();
        let min = minimize_at(&w, &Place::Finite(rat(0, 1))).unwrap();
        assert_eq!(min.a4, PolyQ::from_ints(&[1]));
        assert_eq!(min.a6, PolyQ::from_ints(&[1]));
    }

    #[test]
    fn base_change_pair_classifies() {
        // y^2 = x^3 + t: II at 0, II* at infinity
        let w = cubic_plus(PolyQ::var());
        assert_eq!(classify_fiber(&w, &Place::Finite(rat(0, 1))).unwrap(), II);
        assert_eq!(classify_fiber(&w, &Place::Infinity).unwrap(), IIStar);

        // y^2 = x^3 + t^2: IV at 0, IV* at infinity
        let w2 = cubic_plus(t_power(2));
        assert_eq!(classify_fiber(&w2, &Place::Finite(rat(0, 1))).unwrap(), IV);
        assert_eq!(classify_fiber(&w2, &Place::Infinity).unwrap(), IVStar);

        // consistency with the quadratic base-change table
        assert_eq!(II.quadratic_base_change(), IV);
        assert_eq!(IIStar.quadratic_base_change(), IVStar);
    }

    #[test]
    fn iv_star_example_model() {
        // y^2 - t y = x^3 - x^2 - x + (t - 1) has a IV* fiber at infinity
        let w = WeierstrassModel::new(
            PolyQ::zero(),
            PolyQ::from_ints(&[-1]),
            PolyQ::from_ints(&[0, -1]),
            PolyQ::from_ints(&[-1]),
            PolyQ::from_ints(&[-1, 1]),
        )
        .unwrap();
        let min = minimize_at(&w, &Place::Infinity).unwrap();
        assert_eq!(classify_fiber(&min, &Place::Infinity).unwrap(), IVStar);
        // rationality normal form: all degrees at most 2
        for p in w.coefficients() {
            assert!(p.degree().is_none_or(|d| d <= 2));
        }
    }

    #[test]
    fn multiplicative_fibers() {
        // y^2 = x^3 + x^2 + t: a2 is a unit at t = 0, so the fiber is I_n
        let w = WeierstrassModel::new(
            PolyQ::zero(),
            PolyQ::from_ints(&[1]),
            PolyQ::zero(),
            PolyQ::zero(),
            PolyQ::var(),
        )
        .unwrap();
        let v0 = w.discriminant().valuation_at(&rat(0, 1)).unwrap();
        assert!(v0 >= 1);
        assert_eq!(
            classify_fiber(&w, &Place::Finite(rat(0, 1))).unwrap(),
            I(v0)
        );
    }

    #[test]
    fn i_star_zero_from_triple_root() {
        // y^2 = x^3 + t^3: v(a6)/6 = 1/2, cubic disc -27 t^6 has v = 6
        let w = cubic_plus(t_power(3));
        assert_eq!(
            classify_fiber(&w, &Place::Finite(rat(0, 1))).unwrap(),
            IStar(0)
        );
    }

    #[test]
    fn i_star_n_row() {
        // y^2 = x^3 + t x^2 + t^3: min v(a_i)/i = 1/2 via a2? v(a2)=1 -> 1/2,
        // v(d) > 6 and v(a2^2 - 3 a4) = 2 force I*_{v(disc)-6}
        let w = WeierstrassModel::new(
            PolyQ::zero(),
            PolyQ::var(),
            PolyQ::zero(),
            PolyQ::zero(),
            t_power(3),
        )
        .unwrap();
        let v0 = w.discriminant().valuation_at(&rat(0, 1)).unwrap();
        let f = classify_fiber(&w, &Place::Finite(rat(0, 1))).unwrap();
        assert_eq!(f, IStar(v0 - 6));
        assert_eq!(f.euler_number(), v0);
    }

    #[test]
    fn surface_classification_with_coverage() {
        let w = cubic_plus(PolyQ::var());
        let c = classify_surface(&w, &[Place::Finite(rat(0, 1)), Place::Infinity]).unwrap();
        assert_eq!(c.fibers, vec![II, IIStar]);
        assert_eq!(c.euler_sum(), 12);

        let w2 = cubic_plus(t_power(2));
        let c2 = classify_surface(&w2, &[Place::Finite(rat(0, 1)), Place::Infinity]).unwrap();
        assert_eq!(c2.fibers, vec![IV, IVStar]);
        assert_eq!(c2.euler_sum(), 12);

        // omitting the multiple root at 0 must fail
        assert!(matches!(
            classify_surface(&w, &[Place::Infinity]),
            Err(Error::IncompletePlaces(_))
        ));
    }

    #[test]
    fn uncovered_simple_roots_become_i1() {
        // y^2 = x^3 + x + t: disc = -16(4 + 27 t^2), two simple irrational roots
        let w = WeierstrassModel::new(
            PolyQ::zero(),
            PolyQ::zero(),
            PolyQ::zero(),
            PolyQ::from_ints(&[1]),
            PolyQ::var(),
        )
        .unwrap();
        let c = classify_surface(&w, &[Place::Infinity]).unwrap();
        let i1s = c.fibers.iter().filter(|f| **f == I(1)).count();
        assert_eq!(i1s, 2);
        assert_eq!(c.euler_sum(), 12);
    }

    #[test]
    fn euler_equals_discriminant_valuation() {
        let corpus = [
            cubic_plus(PolyQ::var()),
            cubic_plus(t_power(2)),
            cubic_plus(t_power(3)),
        ];
        for w in &corpus {
            let v0 = w.discriminant().valuation_at(&rat(0, 1)).unwrap();
            let zero = Place::Finite(rat(0, 1));
            let f0 = classify_fiber(&minimize_at(w, &zero).unwrap(), &zero).unwrap();
            assert_eq!(f0.euler_number(), v0);
            let minf = minimize_at(w, &Place::Infinity).unwrap();
            let vinf = valuation(&minf.discriminant(), &Place::Infinity, 12)
                .unwrap()
                .unwrap();
            let finf = classify_fiber(&minf, &Place::Infinity).unwrap();
            assert_eq!(finf.euler_number(), vinf);
            assert_eq!(v0 + vinf, 12, "all degeneration at 0 and infinity");
        }
    }

    #[test]
    fn classification_is_stable_under_minimize() {
        let w = cubic_plus(PolyQ::var());
        let zero = Place::Finite(rat(0, 1));
        let min = minimize_at(&w, &zero).unwrap();
        assert_eq!(
            classify_fiber(&w, &zero).unwrap(),
            classify_fiber(&min, &zero).unwrap()
        );
    }

    #[test]
    fn json_model_round_trip() {
        let v: serde_json::Value =
            serde_json::from_str(r#"{"a1":[],"a2":[],"a3":[],"a4":[],"a6":["0","1"]}"#).unwrap();
        let w = model_from_json(&v).unwrap();
        assert_eq!(w, cubic_plus(PolyQ::var()));
        assert_eq!(Place::parse("inf").unwrap(), Place::Infinity);
        assert_eq!(Place::parse("\u{221e}").unwrap(), Place::Infinity);
        assert_eq!(Place::parse("-3/2").unwrap(), Place::Finite(rat(-3, 2)));
    }
}
