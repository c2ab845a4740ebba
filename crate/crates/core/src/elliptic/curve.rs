use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::EllipticError;
use crate::serde_int::RatRepr;

/// `y² = x³ + a4·x + a6` over Q.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CurveRepr", into = "CurveRepr")]
pub struct CurveQ {
    a4: BigInt,
    a6: BigInt,
}

#[derive(Clone, Serialize, Deserialize)]
struct CurveRepr {
    #[serde(with = "crate::serde_int::bigint")]
    a4: BigInt,
    #[serde(with = "crate::serde_int::bigint")]
    a6: BigInt,
}

impl TryFrom<CurveRepr> for CurveQ {
    type Error = EllipticError;

    fn try_from(r: CurveRepr) -> Result<Self, EllipticError> {
        CurveQ::new(r.a4, r.a6)
    }
}

impl From<CurveQ> for CurveRepr {
    fn from(c: CurveQ) -> Self {
        CurveRepr { a4: c.a4, a6: c.a6 }
    }
}

impl CurveQ {
    pub fn new(a4: BigInt, a6: BigInt) -> Result<Self, EllipticError> {
        let c = CurveQ { a4, a6 };
        if c.discriminant().is_zero() {
            return Err(EllipticError::Singular);
        }
        Ok(c)
    }

    pub fn from_i64(a4: i64, a6: i64) -> Result<Self, EllipticError> {
        Self::new(BigInt::from(a4), BigInt::from(a6))
    }

    pub fn a4(&self) -> &BigInt {
        &self.a4
    }

    pub fn a6(&self) -> &BigInt {
        &self.a6
    }

    /// `−16(4a4³ + 27a6²)`
    pub fn discriminant(&self) -> BigInt {
        let inner = BigInt::from(4) * self.a4.pow(3) + BigInt::from(27) * self.a6.pow(2);
        BigInt::from(-16) * inner
    }

    pub fn contains(&self, p: &RationalPoint) -> bool {
        match p {
            RationalPoint::Infinity => true,
            RationalPoint::Affine(x, y) => {
                let a4 = BigRational::from_integer(self.a4.clone());
                let a6 = BigRational::from_integer(self.a6.clone());
                y * y == x * x * x + a4 * x + a6
            }
        }
    }

    pub fn neg(&self, p: &RationalPoint) -> RationalPoint {
        match p {
            RationalPoint::Infinity => RationalPoint::Infinity,
            RationalPoint::Affine(x, y) => RationalPoint::Affine(x.clone(), -y),
        }
    }

    pub fn add(&self, p: &RationalPoint, q: &RationalPoint) -> RationalPoint {
        let (x1, y1, x2, y2) = match (p, q) {
            (RationalPoint::Infinity, _) => return q.clone(),
            (_, RationalPoint::Infinity) => return p.clone(),
            (RationalPoint::Affine(x1, y1), RationalPoint::Affine(x2, y2)) => (x1, y1, x2, y2),
        };
        let lambda = if x1 == x2 {
            if (y1 + y2).is_zero() {
                return RationalPoint::Infinity;
            }
            let three = BigRational::from_integer(BigInt::from(3));
            let a4 = BigRational::from_integer(self.a4.clone());
            (three * x1 * x1 + a4) / (y1 + y1)
        } else {
            (y2 - y1) / (x2 - x1)
        };
        let x3 = &lambda * &lambda - x1 - x2;
        let y3 = lambda * (x1 - &x3) - y1;
        RationalPoint::Affine(x3, y3)
    }

    pub fn mul(&self, k: &BigInt, p: &RationalPoint) -> RationalPoint {
        let base = if k.is_negative() { self.neg(p) } else { p.clone() };
        let k = k.abs();
        let mut acc = RationalPoint::Infinity;
        for i in (0..k.bits()).rev() {
            acc = self.add(&acc, &acc);
            if k.bit(i) {
                acc = self.add(&acc, &base);
            }
        }
        acc
    }

    /// Least `n ≤ 12` with `n·P = O`; rational torsion never has larger order.
    pub fn torsion_order(&self, p: &RationalPoint) -> Option<u32> {
        let mut acc = p.clone();
        for n in 1..=12u32 {
            if acc.is_infinity() {
                return Some(n);
            }
            acc = self.add(&acc, p);
        }
        None
    }
}

/// A point of `E(Q)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RationalPoint {
    Infinity,
    Affine(BigRational, BigRational),
}

impl RationalPoint {
    pub fn affine_i64(x: i64, y: i64) -> Self {
        RationalPoint::Affine(
            BigRational::from_integer(BigInt::from(x)),
            BigRational::from_integer(BigInt::from(y)),
        )
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, RationalPoint::Infinity)
    }

    /// Primitive integer projective coordinates `(X : Y : Z)`.
    pub fn projective(&self) -> [BigInt; 3] {
        match self {
            RationalPoint::Infinity => [BigInt::zero(), BigInt::one(), BigInt::zero()],
            RationalPoint::Affine(x, y) => {
                use num_integer::Integer;
                let l = x.denom().lcm(y.denom());
                let xx = x.numer() * (&l / x.denom());
                let yy = y.numer() * (&l / y.denom());
                let g = xx.gcd(&yy).gcd(&l);
                [xx / &g, yy / &g, l / g]
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum PointRepr {
    /// `"O"` for the point at infinity.
    Infinity(String),
    Affine([RatRepr; 2]),
}

impl Serialize for RationalPoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            RationalPoint::Infinity => PointRepr::Infinity("O".into()),
            RationalPoint::Affine(x, y) => PointRepr::Affine([RatRepr::from(x), RatRepr::from(y)]),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        match PointRepr::deserialize(d)? {
            PointRepr::Infinity(s) if s == "O" => Ok(RationalPoint::Infinity),
            PointRepr::Infinity(s) => Err(D::Error::custom(format!("expected \"O\" or [x, y], got {s:?}"))),
            PointRepr::Affine([x, y]) => Ok(RationalPoint::Affine(
                BigRational::try_from(x).map_err(D::Error::custom)?,
                BigRational::try_from(y).map_err(D::Error::custom)?,
            )),
        }
    }
}

/// Coefficients over the Mordell–Weil generators plus a torsion point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormalPoint {
    #[serde(with = "crate::serde_int::bigint_vec")]
    pub coeffs: Vec<BigInt>,
    #[serde(default)]
    pub torsion_index: usize,
}

impl FormalPoint {
    pub fn new(coeffs: &[i64], torsion_index: usize) -> Self {
        FormalPoint {
            coeffs: coeffs.iter().map(|&c| BigInt::from(c)).collect(),
            torsion_index,
        }
    }

    pub fn max_abs_coeff(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_default()
    }
}

/// Generators of `E(Q)` modulo torsion together with the whole torsion
/// subgroup, whose entry 0 is the identity.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "MwRepr", into = "MwRepr")]
pub struct MWPresentation {
    curve: CurveQ,
    generators: Vec<RationalPoint>,
    torsion_points: Vec<RationalPoint>,
    /// `torsion_table[i][j]` is the index of `T_i + T_j`.
    torsion_table: Vec<Vec<usize>>,
}

#[derive(Clone, Serialize, Deserialize)]
struct MwRepr {
    curve: CurveQ,
    generators: Vec<RationalPoint>,
    #[serde(default)]
    torsion_points: Vec<RationalPoint>,
}

impl TryFrom<MwRepr> for MWPresentation {
    type Error = EllipticError;

    fn try_from(r: MwRepr) -> Result<Self, EllipticError> {
        MWPresentation::new(r.curve, r.generators, r.torsion_points)
    }
}

impl From<MWPresentation> for MwRepr {
    fn from(m: MWPresentation) -> Self {
        MwRepr {
            curve: m.curve,
            generators: m.generators,
            torsion_points: m.torsion_points,
        }
    }
}

impl MWPresentation {
    /// An empty torsion list stands for the trivial group. Otherwise the list
    /// must start with the identity and be closed under addition.
    pub fn new(
        curve: CurveQ,
        generators: Vec<RationalPoint>,
        mut torsion_points: Vec<RationalPoint>,
    ) -> Result<Self, EllipticError> {
        for (i, g) in generators.iter().enumerate() {
            if !curve.contains(g) {
                return Err(EllipticError::NotOnCurve(format!("generator {i}")));
            }
            if curve.torsion_order(g).is_some() {
                return Err(EllipticError::Presentation(format!("generator {i} is torsion")));
            }
        }
        if torsion_points.is_empty() {
            torsion_points.push(RationalPoint::Infinity);
        }
        if !torsion_points[0].is_infinity() {
            return Err(EllipticError::Presentation("torsion list must start with \"O\"".into()));
        }
        for (i, t) in torsion_points.iter().enumerate() {
            if !curve.contains(t) {
                return Err(EllipticError::NotOnCurve(format!("torsion point {i}")));
            }
        }
        let find = |q: &RationalPoint| torsion_points.iter().position(|t| t == q);
        let mut table = Vec::with_capacity(torsion_points.len());
        for (i, a) in torsion_points.iter().enumerate() {
            if find(&curve.neg(a)).is_none() {
                return Err(EllipticError::Presentation(format!("torsion list lacks -T_{i}")));
            }
            let row = torsion_points
                .iter()
                .enumerate()
                .map(|(j, b)| {
                    find(&curve.add(a, b)).ok_or_else(|| {
                        EllipticError::Presentation(format!("torsion list lacks T_{i} + T_{j}"))
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            table.push(row);
        }
        Ok(MWPresentation {
            curve,
            generators,
            torsion_points,
            torsion_table: table,
        })
    }

    pub fn curve(&self) -> &CurveQ {
        &self.curve
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[RationalPoint] {
        &self.generators
    }

    pub fn torsion_points(&self) -> &[RationalPoint] {
        &self.torsion_points
    }

    pub fn torsion_table(&self) -> &[Vec<usize>] {
        &self.torsion_table
    }

    pub fn check_formal(&self, f: &FormalPoint) -> Result<(), EllipticError> {
        if f.coeffs.len() != self.rank() {
            return Err(EllipticError::Presentation(format!(
                "formal point has {} coefficients for {} generators",
                f.coeffs.len(),
                self.rank()
            )));
        }
        if f.torsion_index >= self.torsion_points.len() {
            return Err(EllipticError::Presentation(format!(
                "torsion index {} out of range",
                f.torsion_index
            )));
        }
        Ok(())
    }

    /// The rational point `Σ c_i P_i + T`. Heights grow quadratically in the
    /// coefficients, so this is meant for small inputs.
    pub fn evaluate(&self, f: &FormalPoint) -> Result<RationalPoint, EllipticError> {
        self.check_formal(f)?;
        let mut acc = self.torsion_points[f.torsion_index].clone();
        for (c, g) in f.coeffs.iter().zip(&self.generators) {
            acc = self.curve.add(&acc, &self.curve.mul(c, g));
        }
        Ok(acc)
    }

    pub fn add_formal(&self, a: &FormalPoint, b: &FormalPoint) -> FormalPoint {
        FormalPoint {
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect(),
            torsion_index: self.torsion_table[a.torsion_index][b.torsion_index],
        }
    }
}
