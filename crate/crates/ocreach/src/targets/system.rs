//! Parametric interval systems `S ⊆ ℤ^p × ℤ` in the monotone linear-parametric format.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde_json::{json, Map, Value};

use super::interval::{ConcreteIntervalSet, Interval, IntervalList};
use super::linear::{column_rank, feasible_nonneg, solve_unique};
use crate::arith::{big_string, ceil_div, json_bigint, lcm_u64};
use crate::error::{Error, Result};

/// Largest constant a single case split may enumerate during branch normalization.
const MAX_CASE_SPLIT: u64 = 64;

/// `constant + Σ coeffs[j]·λ_j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineForm {
    pub constant: BigInt,
    pub coeffs: Vec<BigInt>,
}

impl AffineForm {
    pub fn new(constant: impl Into<BigInt>, coeffs: Vec<BigInt>) -> Self {
        AffineForm { constant: constant.into(), coeffs }
    }

    pub fn constant(c: impl Into<BigInt>, vars: usize) -> Self {
        AffineForm { constant: c.into(), coeffs: vec![BigInt::zero(); vars] }
    }

    pub fn eval(&self, lambda: &[BigInt]) -> BigInt {
        let mut v = self.constant.clone();
        for (c, l) in self.coeffs.iter().zip(lambda) {
            v += c * l;
        }
        v
    }

    pub fn sub(&self, other: &AffineForm) -> AffineForm {
        AffineForm {
            constant: &self.constant - &other.constant,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn add_const(&self, c: &BigInt) -> AffineForm {
        AffineForm { constant: &self.constant + c, coeffs: self.coeffs.clone() }
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_monotone(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    /// Substitutes `λ_j = v` and drops variable `j`.
    pub fn fix_var(&self, j: usize, v: &BigInt) -> AffineForm {
        let mut coeffs = self.coeffs.clone();
        let c = coeffs.remove(j);
        AffineForm { constant: &self.constant + c * v, coeffs }
    }

    /// Substitutes `λ_j = shift + λ_j`.
    pub fn shift_var(&self, j: usize, shift: &BigInt) -> AffineForm {
        AffineForm { constant: &self.constant + &self.coeffs[j] * shift, coeffs: self.coeffs.clone() }
    }

    fn to_json(&self) -> Value {
        json!({"const": big_string(&self.constant), "coeffs": self.coeffs.iter().map(big_string).collect::<Vec<_>>()})
    }
}

impl fmt::Display for AffineForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.constant)?;
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                write!(f, "{}{}*l{}", if c.is_negative() { "" } else { "+" }, c, j)?;
            }
        }
        Ok(())
    }
}

/// A slot endpoint.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Bound {
    NegInf,
    PosInf,
    At(AffineForm),
}

impl Bound {
    pub fn form(&self) -> Option<&AffineForm> {
        match self {
            Bound::At(f) => Some(f),
            _ => None,
        }
    }

    fn map(&self, f: impl Fn(&AffineForm) -> AffineForm) -> Bound {
        match self {
            Bound::At(a) => Bound::At(f(a)),
            other => other.clone(),
        }
    }

    fn eval(&self, lambda: &[BigInt]) -> Option<BigInt> {
        self.form().map(|f| f.eval(lambda))
    }

    fn to_json(&self) -> Value {
        match self {
            Bound::NegInf => json!("-inf"),
            Bound::PosInf => json!("+inf"),
            Bound::At(f) => f.to_json(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Slot {
    pub left: Bound,
    pub right: Bound,
}

impl Slot {
    pub fn new(left: Bound, right: Bound) -> Self {
        Slot { left, right }
    }

    /// `right − left` for a finite slot.
    pub fn length_form(&self) -> Option<AffineForm> {
        Some(self.right.form()?.sub(self.left.form()?))
    }

    fn map(&self, f: impl Fn(&AffineForm) -> AffineForm + Copy) -> Slot {
        Slot { left: self.left.map(f), right: self.right.map(f) }
    }
}

/// One linear piece: parameters `t = base + periods·λ` for `λ ∈ ℕ^k` and the slots of `S[t]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Branch {
    pub base: Vec<BigInt>,
    /// `p` rows, `k` columns.
    pub periods: Vec<Vec<BigInt>>,
    pub vars: usize,
    pub slots: Vec<Slot>,
    /// `(B_x, c)`: slots contain only `x ≡ c (mod B_x)`.
    pub stride: (u64, u64),
}

impl Branch {
    pub fn params(&self, lambda: &[BigInt]) -> Vec<BigInt> {
        self.base
            .iter()
            .zip(&self.periods)
            .map(|(b, row)| b + row.iter().zip(lambda).map(|(c, l)| c * l).sum::<BigInt>())
            .collect()
    }

    /// The unique `λ ∈ ℕ^k` with `params(λ) = t`, if any.
    pub fn solve(&self, t: &[BigInt]) -> Option<Vec<BigInt>> {
        let rhs: Vec<BigInt> = t.iter().zip(&self.base).map(|(x, b)| x - b).collect();
        if self.vars == 0 {
            return rhs.iter().all(Zero::is_zero).then(Vec::new);
        }
        let sol = solve_unique(&self.periods, self.vars, &rhs)?;
        let mut out = Vec::with_capacity(sol.len());
        for q in sol {
            if !q.is_integer() || q.is_negative() {
                return None;
            }
            out.push(q.to_integer());
        }
        Some(out)
    }

    /// Slot intervals at `λ` in original coordinates (empty slots omitted).
    pub fn slot_intervals(&self, lambda: &[BigInt]) -> Vec<Interval> {
        self.slots
            .iter()
            .map(|s| Interval::new(s.left.eval(lambda), s.right.eval(lambda)))
            .filter(|iv| !iv.is_empty())
            .collect()
    }

    /// `S[t]` contributed by this branch at `λ`.
    pub fn eval_at(&self, lambda: &[BigInt]) -> ConcreteIntervalSet {
        let (m, c) = self.stride;
        let list = IntervalList::from_intervals(self.slot_intervals(lambda));
        if m == 1 {
            return ConcreteIntervalSet::stride_free(list);
        }
        let q = list.preimage_affine(&BigInt::from(m), &BigInt::from(c));
        ConcreteIntervalSet::strided(m, c, q).expect("validated stride")
    }

    /// `left_{i+1} − right_i`, the distance between consecutive slots.
    pub fn gap_distance_form(&self, i: usize) -> AffineForm {
        let r = self.slots[i].right.form().expect("inner slot ends are finite");
        let l = self.slots[i + 1].left.form().expect("inner slot ends are finite");
        l.sub(r)
    }

    fn substitute(&self, j: usize, v: &BigInt) -> Branch {
        let base = self.base.iter().zip(&self.periods).map(|(b, row)| b + &row[j] * v).collect();
        let periods = self
            .periods
            .iter()
            .map(|row| {
                let mut r = row.clone();
                r.remove(j);
                r
            })
            .collect();
        Branch {
            base,
            periods,
            vars: self.vars - 1,
            slots: self.slots.iter().map(|s| s.map(|f| f.fix_var(j, v))).collect(),
            stride: self.stride,
        }
    }

    fn rebase(&self, j: usize, shift: &BigInt) -> Branch {
        let base = self.base.iter().zip(&self.periods).map(|(b, row)| b + &row[j] * shift).collect();
        Branch {
            base,
            periods: self.periods.clone(),
            vars: self.vars,
            slots: self.slots.iter().map(|s| s.map(|f| f.shift_var(j, shift))).collect(),
            stride: self.stride,
        }
    }

    /// Structural checks: dimensions, stride, slot shapes, injectivity and monotone forms.
    pub fn validate(&self, idx: usize, p: usize) -> Result<()> {
        let path = format!("branches[{idx}]");
        if self.base.len() != p || self.periods.len() != p {
            return Err(Error::parse(&path, format!("base and periods must have {p} rows")));
        }
        if self.periods.iter().any(|r| r.len() != self.vars) {
            return Err(Error::parse(format!("{path}.periods"), "rows must have equal length"));
        }
        let (m, c) = self.stride;
        if m == 0 {
            return Err(Error::parse(format!("{path}.stride"), "stride modulus must be at least 1"));
        }
        if c >= m {
            return Err(Error::parse(format!("{path}.stride"), "stride residue must lie in [0, modulus)"));
        }
        let last = self.slots.len().saturating_sub(1);
        for (i, s) in self.slots.iter().enumerate() {
            let sp = format!("{path}.slots[{i}]");
            if matches!(s.left, Bound::PosInf) || (matches!(s.left, Bound::NegInf) && i != 0) {
                return Err(Error::parse(format!("{sp}.left"), "-inf is only allowed as the left end of the first slot"));
            }
            if matches!(s.right, Bound::NegInf) || (matches!(s.right, Bound::PosInf) && i != last) {
                return Err(Error::parse(format!("{sp}.right"), "+inf is only allowed as the right end of the last slot"));
            }
            for (side, b) in [("left", &s.left), ("right", &s.right)] {
                if let Some(f) = b.form() {
                    if f.coeffs.len() != self.vars {
                        return Err(Error::parse(format!("{sp}.{side}.coeffs"), format!("expected {} entries", self.vars)));
                    }
                }
            }
            if let Some(len) = s.length_form() {
                if !len.is_monotone() {
                    return Err(Error::NonMonotone(format!("{sp}: length form {len} has a negative coefficient")));
                }
            }
        }
        for i in 0..self.slots.len().saturating_sub(1) {
            let g = self.gap_distance_form(i);
            if !g.is_monotone() {
                return Err(Error::NonMonotone(format!(
                    "{path}: gap form between slots {i} and {} is {g}",
                    i + 1
                )));
            }
        }
        if column_rank(&self.periods, self.vars) < self.vars {
            return Err(Error::NotInjective(idx));
        }
        Ok(())
    }

    /// True when every finite slot is nonempty and consecutive slots are at distance ≥ 2 for all λ.
    pub fn is_canonical(&self) -> bool {
        self.stride.0 == 1
            && self.slots.iter().all(|s| s.length_form().is_none_or(|l| !l.constant.is_negative() && l.is_monotone()))
            && (0..self.slots.len().saturating_sub(1)).all(|i| {
                let g = self.gap_distance_form(i);
                g.constant >= BigInt::from(2) && g.is_monotone()
            })
    }

    /// Splits a stride-free monotone branch into canonical branches with the same union of images.
    pub fn canonical_pieces(&self) -> Result<Vec<Branch>> {
        if self.stride.0 != 1 {
            return Err(Error::Precondition("canonical pieces need a stride-free branch".into()));
        }
        let mut out = Vec::new();
        self.canonicalize_into(&mut out)?;
        Ok(out)
    }

    fn canonicalize_into(&self, out: &mut Vec<Branch>) -> Result<()> {
        // Slots empty for small λ.
        for (i, s) in self.slots.iter().enumerate() {
            if let Some(len) = s.length_form() {
                if len.constant.is_negative() {
                    if len.is_constant() {
                        let mut b = self.clone();
                        b.slots.remove(i);
                        return b.canonicalize_into(out);
                    }
                    return self.split_on(&len, &BigInt::zero(), out);
                }
            }
        }
        // Slots that touch or overlap for small λ.
        for i in 0..self.slots.len().saturating_sub(1) {
            let g = self.gap_distance_form(i);
            let two = BigInt::from(2);
            if g.constant < two {
                if !g.is_constant() {
                    return self.split_on(&g, &two, out);
                }
                return self.merge_slots(i, out);
            }
        }
        out.push(self.clone());
        Ok(())
    }

    /// Case split on a variable of `form` so that `form ≥ target` holds in the generic piece.
    fn split_on(&self, form: &AffineForm, target: &BigInt, out: &mut Vec<Branch>) -> Result<()> {
        let (j, c) = form
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_positive())
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
            .map(|(j, c)| (j, c.clone()))
            .ok_or_else(|| Error::Internal("split on a constant form".into()))?;
        let threshold = ceil_div(&(target - &form.constant), &c);
        if threshold > BigInt::from(MAX_CASE_SPLIT) {
            return Err(Error::Unsupported(format!(
                "branch normalization needs {threshold} case splits (limit {MAX_CASE_SPLIT})"
            )));
        }
        self.rebase(j, &threshold).canonicalize_into(out)?;
        let mut v = BigInt::zero();
        while v < threshold {
            self.substitute(j, &v).canonicalize_into(out)?;
            v += 1;
        }
        Ok(())
    }

    /// Replaces slots `i` and `i+1` (distance ≤ 1 for all λ) by their union.
    fn merge_slots(&self, i: usize, out: &mut Vec<Branch>) -> Result<()> {
        let (a, b) = (&self.slots[i], &self.slots[i + 1]);
        let left = match (&a.left, &b.left) {
            (Bound::NegInf, _) | (_, Bound::NegInf) => Bound::NegInf,
            (Bound::At(x), Bound::At(y)) => {
                let d = y.sub(x);
                if !d.constant.is_negative() {
                    Bound::At(x.clone())
                } else if d.is_constant() {
                    Bound::At(y.clone())
                } else {
                    return self.split_on(&d, &BigInt::zero(), out);
                }
            }
            _ => return Err(Error::Internal("malformed slot".into())),
        };
        let right = match (&a.right, &b.right) {
            (Bound::PosInf, _) | (_, Bound::PosInf) => Bound::PosInf,
            (Bound::At(x), Bound::At(y)) => {
                let d = y.sub(x);
                if !d.constant.is_negative() {
                    Bound::At(y.clone())
                } else if d.is_constant() {
                    Bound::At(x.clone())
                } else {
                    return self.split_on(&d, &BigInt::zero(), out);
                }
            }
            _ => return Err(Error::Internal("malformed slot".into())),
        };
        let mut br = self.clone();
        br.slots.splice(i..=i + 1, [Slot { left, right }]);
        br.canonicalize_into(out)
    }

    /// The branch with every negative integer added (`S ∪ ℤ_{<0}` on its parameter image).
    pub fn with_negatives(&self) -> Result<Vec<Branch>> {
        let neg = Slot { left: Bound::NegInf, right: Bound::At(AffineForm::constant(-1, self.vars)) };
        if self.stride.0 != 1 {
            let twin = Branch { slots: vec![neg], stride: (1, 0), ..self.clone() };
            return Ok(vec![self.clone(), twin]);
        }
        let mut b = self.clone();
        b.slots.insert(0, neg);
        let mut out = Vec::new();
        if self.slots.first().is_some_and(|s| s.left == Bound::NegInf) {
            b.merge_slots(0, &mut out)?;
        } else {
            if b.slots.len() > 1 {
                let g = b.gap_distance_form(0);
                if !g.is_monotone() {
                    return Err(Error::NonMonotone(format!("left end {g} of the first slot decreases")));
                }
            }
            b.canonicalize_into(&mut out)?;
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "base": self.base.iter().map(big_string).collect::<Vec<_>>(),
            "periods": self.periods.iter().map(|r| r.iter().map(big_string).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "stride": [self.stride.0, self.stride.1],
            "slots": self.slots.iter().map(|s| json!({"left": s.left.to_json(), "right": s.right.to_json()})).collect::<Vec<_>>(),
        })
    }
}

/// A finite union of branches.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearIntervalSystem {
    pub p: usize,
    pub branches: Vec<Branch>,
}

impl LinearIntervalSystem {
    pub fn new(p: usize, branches: Vec<Branch>) -> Result<Self> {
        let s = LinearIntervalSystem { p, branches };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        for (i, b) in self.branches.iter().enumerate() {
            b.validate(i, self.p)?;
        }
        Ok(())
    }

    /// Least common multiple of the branch strides.
    pub fn stride_lcm(&self) -> u64 {
        self.branches.iter().fold(1, |acc, b| lcm_u64(acc, b.stride.0))
    }

    /// `S[t]`, over the modulus `stride_lcm()`.
    pub fn instantiate(&self, t: &[BigInt]) -> Result<ConcreteIntervalSet> {
        if t.len() != self.p {
            return Err(Error::Precondition(format!("expected {} parameters, got {}", self.p, t.len())));
        }
        let mut acc = ConcreteIntervalSet::empty().with_modulus(self.stride_lcm())?;
        for b in &self.branches {
            if let Some(lambda) = b.solve(t) {
                acc = acc.union(&b.eval_at(&lambda));
            }
        }
        Ok(acc)
    }

    /// Whether some branch covers the parameter `t`.
    pub fn in_domain(&self, t: &[BigInt]) -> bool {
        self.branches.iter().any(|b| b.solve(t).is_some())
    }

    /// True when two branches may share a parameter vector (rational relaxation plus per-row gcd test).
    pub fn union_mode(&self) -> bool {
        for i in 0..self.branches.len() {
            for j in i + 1..self.branches.len() {
                if branches_may_overlap(&self.branches[i], &self.branches[j]) {
                    return true;
                }
            }
        }
        false
    }

    /// Monotone total size in bits (numbers plus structure).
    pub fn bit_size(&self) -> u64 {
        let mut total = 1 + self.p as u64;
        for b in &self.branches {
            total += 2;
            for x in b.base.iter().chain(b.periods.iter().flatten()) {
                total += crate::arith::bits(x);
            }
            for s in &b.slots {
                for f in [s.left.form(), s.right.form()].into_iter().flatten() {
                    total += crate::arith::bits(&f.constant) + f.coeffs.iter().map(crate::arith::bits).sum::<u64>();
                }
                total += 2;
            }
        }
        total
    }

    pub fn to_json(&self) -> Value {
        json!({"p": self.p, "branches": self.branches.iter().map(Branch::to_json).collect::<Vec<_>>()})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = expect_object(v, "$")?;
        check_keys(obj, "$", &["p", "branches"])?;
        let p = crate::arith::json_usize(obj.get("p").ok_or_else(|| Error::parse("$.p", "missing field"))?, "$.p")?;
        let branches_v = obj
            .get("branches")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::parse("$.branches", "expected an array"))?;
        let mut branches = Vec::new();
        for (i, bv) in branches_v.iter().enumerate() {
            branches.push(parse_branch(bv, &format!("$.branches[{i}]"), p)?);
        }
        LinearIntervalSystem::new(p, branches)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text)
            .map_err(|e| Error::parse(format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
        Self::from_json(&v)
    }
}

fn branches_may_overlap(a: &Branch, b: &Branch) -> bool {
    // base_a + P_a λ_a − P_b λ_b = base_b.
    let rows: Vec<Vec<BigInt>> = a
        .periods
        .iter()
        .zip(&b.periods)
        .map(|(ra, rb)| ra.iter().cloned().chain(rb.iter().map(|x| -x)).collect())
        .collect();
    let rhs: Vec<BigInt> = b.base.iter().zip(&a.base).map(|(x, y)| x - y).collect();
    for (row, r) in rows.iter().zip(&rhs) {
        let g = row.iter().fold(BigInt::zero(), |g, x| num_integer::Integer::gcd(&g, x));
        if g.is_zero() {
            if !r.is_zero() {
                return false;
            }
        } else if !(r % &g).is_zero() {
            return false;
        }
    }
    feasible_nonneg(&rows, &rhs, a.vars + b.vars)
}

fn expect_object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| Error::parse(path, "expected an object"))
}

fn check_keys(obj: &Map<String, Value>, path: &str, allowed: &[&str]) -> Result<()> {
    for k in obj.keys() {
        if !allowed.contains(&k.as_str()) {
            return Err(Error::parse(format!("{path}.{k}"), "unknown field"));
        }
    }
    Ok(())
}

fn parse_vec(v: &Value, path: &str) -> Result<Vec<BigInt>> {
    let arr = v.as_array().ok_or_else(|| Error::parse(path, "expected an array"))?;
    arr.iter().enumerate().map(|(i, x)| json_bigint(x, &format!("{path}[{i}]"))).collect()
}

fn parse_bound(v: &Value, path: &str, vars: usize) -> Result<Bound> {
    match v {
        Value::String(s) if s == "-inf" => Ok(Bound::NegInf),
        Value::String(s) if s == "+inf" || s == "inf" => Ok(Bound::PosInf),
        Value::Object(obj) => {
            check_keys(obj, path, &["const", "coeffs"])?;
            let c = json_bigint(obj.get("const").ok_or_else(|| Error::parse(format!("{path}.const"), "missing field"))?, &format!("{path}.const"))?;
            let coeffs = match obj.get("coeffs") {
                Some(cv) => parse_vec(cv, &format!("{path}.coeffs"))?,
                None => vec![BigInt::zero(); vars],
            };
            if coeffs.len() != vars {
                return Err(Error::parse(format!("{path}.coeffs"), format!("expected {vars} entries, found {}", coeffs.len())));
            }
            Ok(Bound::At(AffineForm { constant: c, coeffs }))
        }
        _ => Err(Error::parse(path, "expected \"-inf\", \"+inf\" or {\"const\", \"coeffs\"}")),
    }
}

fn parse_branch(v: &Value, path: &str, p: usize) -> Result<Branch> {
    let obj = expect_object(v, path)?;
    check_keys(obj, path, &["base", "periods", "stride", "slots"])?;
    let base = match obj.get("base") {
        Some(b) => parse_vec(b, &format!("{path}.base"))?,
        None if p == 0 => Vec::new(),
        None => return Err(Error::parse(format!("{path}.base"), "missing field")),
    };
    if base.len() != p {
        return Err(Error::parse(format!("{path}.base"), format!("expected {p} entries, found {}", base.len())));
    }
    let periods: Vec<Vec<BigInt>> = match obj.get("periods") {
        Some(Value::Array(rows)) => rows
            .iter()
            .enumerate()
            .map(|(i, r)| parse_vec(r, &format!("{path}.periods[{i}]")))
            .collect::<Result<_>>()?,
        Some(_) => return Err(Error::parse(format!("{path}.periods"), "expected an array of rows")),
        None => vec![Vec::new(); p],
    };
    if periods.len() != p {
        return Err(Error::parse(format!("{path}.periods"), format!("expected {p} rows, found {}", periods.len())));
    }
    let vars = periods.first().map_or(0, Vec::len);
    if let Some(i) = periods.iter().position(|r| r.len() != vars) {
        return Err(Error::parse(format!("{path}.periods[{i}]"), format!("expected {vars} entries")));
    }
    let stride = match obj.get("stride") {
        None => (1, 0),
        Some(sv) => {
            let s = parse_vec(sv, &format!("{path}.stride"))?;
            if s.len() != 2 {
                return Err(Error::parse(format!("{path}.stride"), "expected [modulus, residue]"));
            }
            let m = u64::try_from(&s[0]).map_err(|_| Error::parse(format!("{path}.stride[0]"), "modulus must be a positive integer"))?;
            if m == 0 {
                return Err(Error::parse(format!("{path}.stride[0]"), "stride modulus must be at least 1"));
            }
            let c = u64::try_from(&s[1]).ok().filter(|&c| c < m).ok_or_else(|| {
                Error::parse(format!("{path}.stride[1]"), "residue must lie in [0, modulus)")
            })?;
            (m, c)
        }
    };
    let slots_v = obj
        .get("slots")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::parse(format!("{path}.slots"), "expected an array"))?;
    let mut slots = Vec::new();
    for (i, sv) in slots_v.iter().enumerate() {
        let sp = format!("{path}.slots[{i}]");
        let so = expect_object(sv, &sp)?;
        check_keys(so, &sp, &["left", "right"])?;
        let left = parse_bound(so.get("left").ok_or_else(|| Error::parse(format!("{sp}.left"), "missing field"))?, &format!("{sp}.left"), vars)?;
        let right = parse_bound(so.get("right").ok_or_else(|| Error::parse(format!("{sp}.right"), "missing field"))?, &format!("{sp}.right"), vars)?;
        slots.push(Slot { left, right });
    }
    Ok(Branch { base, periods, vars, slots, stride })
}

/// Convenience constructor for forms written as `(constant, [coefficients])`.
pub fn form(constant: i64, coeffs: &[i64]) -> Bound {
    Bound::At(AffineForm::new(constant, coeffs.iter().map(|&c| BigInt::from(c)).collect()))
}

/// Builds a branch from small integers.
pub fn branch(base: &[i64], periods: &[&[i64]], slots: Vec<(Bound, Bound)>, stride: (u64, u64)) -> Branch {
    let vars = periods.first().map_or(0, |r| r.len());
    Branch {
        base: base.iter().map(|&x| BigInt::from(x)).collect(),
        periods: periods.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(),
        vars,
        slots: slots.into_iter().map(|(l, r)| Slot { left: l, right: r }).collect(),
        stride,
    }
}

/// The parameter vector `t` as big integers.
pub fn params(t: &[i64]) -> Vec<BigInt> {
    t.iter().map(|&x| BigInt::from(x)).collect()
}
