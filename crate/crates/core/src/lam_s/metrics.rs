use super::term::TermS;
use crate::coercion::CoercionS;

pub fn coercion_size(c: &CoercionS) -> usize {
    c.size()
}

/// Term nodes plus the sizes of the coercions they carry.
pub fn term_size(m: &TermS) -> usize {
    match m {
        TermS::Const(_) | TermS::Var(_) | TermS::Blame(_) | TermS::GlobalRef(_) => 1,
        TermS::Abs(_, _, b) => 1 + term_size(b),
        TermS::Op(_, l, r) | TermS::App(l, r) => 1 + term_size(l) + term_size(r),
        TermS::CrcApp(n, s) | TermS::CoercedVal(n, s) => 1 + term_size(n) + s.size(),
        TermS::If(c, t, e) => 1 + term_size(c) + term_size(t) + term_size(e),
    }
}

/// Size of the largest single coercion in the term.
pub fn max_coercion_size(m: &TermS) -> usize {
    let mut best = 0;
    m.for_each_coercion(&mut |c, _| best = best.max(c.size()));
    best
}

/// `f(M) = 4(k + l) + 2m + n`, with `k`, `l` the total sizes of coercions
/// under `<·>` and `<<·>>` and `m`, `n` the number of such nodes.
pub fn metric_f(m: &TermS) -> usize {
    let (mut k, mut l, mut apps, mut vals) = (0, 0, 0, 0);
    m.for_each_coercion(&mut |c, delayed| {
        if delayed {
            l += c.size();
            vals += 1;
        } else {
            k += c.size();
            apps += 1;
        }
    });
    4 * (k + l) + 2 * apps + vals
}
