//! Exponent-parameterized identity families and n-ary laws.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::ast::IdentityAst;
use super::parse::parse_identity;

/// Exponents of the two structure maps in the parameterized identities.
///
/// Tuples are written in the order `(p, q, m, n, l, s, k, t)`, which is the order
/// the regular-case substitution `(-2, 0, -2, 0, -1, -1, -1, -1)` is stated in.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct ExponentTuple {
    pub p: i32,
    pub q: i32,
    pub m: i32,
    pub n: i32,
    pub l: i32,
    pub s: i32,
    pub k: i32,
    pub t: i32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExponentLaw {
    First,
    Second,
    Regular,
}

impl ExponentTuple {
    pub fn from_slice(v: &[i32]) -> Option<Self> {
        match *v {
            [p, q, m, n, l, s, k, t] => Some(ExponentTuple { p, q, m, n, l, s, k, t }),
            _ => None,
        }
    }

    pub fn to_array(self) -> [i32; 8] {
        [self.p, self.q, self.m, self.n, self.l, self.s, self.k, self.t]
    }

    /// The substitution that turns the second family member into the fixed regular identity.
    pub fn regular_instance() -> Self {
        ExponentTuple::from_slice(&[-2, 0, -2, 0, -1, -1, -1, -1]).unwrap()
    }
}

/// Zero tuple, the regular substitution, then `extra` seeded tuples with entries in [-2, 2].
pub fn default_grid(seed: u64, extra: usize) -> Vec<ExponentTuple> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(31);
    let mut out = vec![ExponentTuple::default(), ExponentTuple::regular_instance()];
    for _ in 0..extra {
        let v: Vec<i32> = (0..8).map(|_| rng.gen_range(-2..=2)).collect();
        out.push(ExponentTuple::from_slice(&v).unwrap());
    }
    out
}

/// `a^i(b^j(x))`; the parser drops zero powers.
fn ab(i: i32, j: i32, x: &str) -> String {
    format!("a^{i}(b^{j}({x}))")
}

pub fn exponent_law_text(which: ExponentLaw, e: ExponentTuple) -> String {
    let ExponentTuple { p, q, m, n, l, s, k, t } = e;
    match which {
        ExponentLaw::First => format!(
            "forall u, v, y, z: br(mul({}, {}), mul({}, {})) + br(mul({}, {}), mul({}, {})) \
             - 2*mul(mul({}, {}), br({}, {})) = 0",
            ab(p, q + 2, "y"),
            ab(l + 1, s + 2, "v"),
            ab(m + 2, n, "u"),
            ab(k + 1, t + 1, "z"),
            ab(m + 1, n + 1, "u"),
            ab(p + 1, q + 1, "y"),
            ab(k, t + 2, "z"),
            ab(l + 2, s + 1, "v"),
            ab(m + 1, n + 1, "u"),
            ab(l + 1, s + 2, "v"),
            ab(p + 1, q + 1, "y"),
            ab(k + 1, t + 1, "z"),
        ),
        ExponentLaw::Second => format!(
            "forall x, y, u, v: mul({}, br({}, mul({}, {}))) + mul({}, br(mul({}, {}), {})) \
             + mul(mul({}, {}), br({}, {})) = 0",
            ab(p + 2, q + 2, "x"),
            ab(l + 1, s + 2, "u"),
            ab(m + 2, n, "y"),
            ab(k + 2, t, "v"),
            ab(k + 1, t + 3, "v"),
            ab(p + 1, q + 1, "x"),
            ab(m + 2, n, "y"),
            ab(l + 2, s + 1, "u"),
            ab(m + 1, n + 2, "y"),
            ab(l + 1, s + 2, "u"),
            ab(k + 1, t + 2, "v"),
            ab(p + 3, q, "x"),
        ),
        ExponentLaw::Regular => "forall x, y, u, v: mul(b^2(x), br(b(u), mul(y, a(b^-1(v))))) \
             + mul(b^2(v), br(mul(a^-1(b(x)), y), a(u))) \
             + mul(mul(a^-1(b^2(y)), b(u)), br(b(v), a(x))) = 0"
            .to_string(),
    }
}

/// The chosen family member at `e`; the fixed identity ignores `e`.
pub fn instantiate_exponent_law(which: ExponentLaw, e: ExponentTuple) -> IdentityAst {
    parse_identity(&exponent_law_text(which, e)).expect("generated identity parses")
}

fn nary_vars(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

/// `n*mul(a(b(u)), nbr(x1..xn)) - sum_i nbr(b(x1), .., mul(b(u), xi), .., b(xn))`,
/// the last slot taking `mul(a(u), xn)` instead.
pub fn nary_compat_text(n: usize, op: &str) -> String {
    let xs = nary_vars(n);
    let mut s = format!("forall u, {}: {n}*mul(a(b(u)), {op}({}))", xs.join(", "), xs.join(", "));
    for i in 0..n {
        let args: Vec<String> = xs
            .iter()
            .enumerate()
            .map(|(j, x)| match (j == i, j + 1 == n) {
                (true, false) => format!("mul(b(u), {x})"),
                (true, true) => format!("mul(a(u), {x})"),
                _ => format!("b({x})"),
            })
            .collect();
        s.push_str(&format!(" - {op}({})", args.join(", ")));
    }
    s.push_str(" = 0");
    s
}

/// Skew under swapping slots `i` and `i+1` of `op(b(x1), .., b(x_{n-1}), a(xn))`.
pub fn nary_skew_text(n: usize, i: usize, op: &str) -> String {
    let xs = nary_vars(n);
    let slot = |order: &[usize]| -> String {
        let args: Vec<String> = order
            .iter()
            .enumerate()
            .map(|(pos, &v)| if pos + 1 == n { format!("a({})", xs[v]) } else { format!("b({})", xs[v]) })
            .collect();
        format!("{op}({})", args.join(", "))
    };
    let id: Vec<usize> = (0..n).collect();
    let mut swapped = id.clone();
    swapped.swap(i, i + 1);
    format!("forall {}: {} + {} = 0", xs.join(", "), slot(&id), slot(&swapped))
}
