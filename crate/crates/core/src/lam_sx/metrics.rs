use super::term::Tx;

/// Term nodes plus the sizes of the coercions they carry.
pub fn term_size(m: &Tx) -> usize {
    match m {
        Tx::Const(_) | Tx::Var(_) | Tx::Blame(_) | Tx::GlobalRef(_) => 1,
        Tx::CrcLit(s) => 1 + s.size(),
        Tx::Abs2 { body, .. } => 1 + term_size(body),
        Tx::Op(_, l, r) | Tx::Let(_, l, r) | Tx::Compose(l, r) | Tx::CrcApp(l, r) => 1 + term_size(l) + term_size(r),
        Tx::CoercedVal(u, d) => 1 + term_size(u) + d.size(),
        Tx::App2(a, b, c) | Tx::If(a, b, c) => 1 + term_size(a) + term_size(b) + term_size(c),
    }
}

/// Size of the largest coercion literal or delayed coercion in the term.
pub fn max_coercion_size(m: &Tx) -> usize {
    let mut best = 0;
    m.for_each_coercion(&mut |c, _| best = best.max(c.size()));
    best
}

/// `4 * (coercion sizes) + 2 * #M<N> + #U<<d>> + #let`.
pub fn metric_fx(m: &Tx) -> usize {
    let mut sizes = 0;
    m.for_each_coercion(&mut |c, _| sizes += c.size());
    4 * sizes + count(m)
}

fn count(m: &Tx) -> usize {
    match m {
        Tx::Const(_) | Tx::Var(_) | Tx::Blame(_) | Tx::GlobalRef(_) | Tx::CrcLit(_) => 0,
        Tx::Abs2 { body, .. } => count(body),
        Tx::CrcApp(l, r) => 2 + count(l) + count(r),
        Tx::Let(_, l, r) => 1 + count(l) + count(r),
        Tx::Op(_, l, r) | Tx::Compose(l, r) => count(l) + count(r),
        Tx::CoercedVal(u, _) => 1 + count(u),
        Tx::App2(a, b, c) | Tx::If(a, b, c) => count(a) + count(b) + count(c),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coercion::CoercionX;
    use crate::lam_sx::term::*;
    use crate::types::Ground;

    #[test]
    fn sizes_count_literals() {
        let m = crc(int(1), lit(CoercionX::inj(Ground::INT)));
        assert_eq!(max_coercion_size(&m), 2);
        assert_eq!(term_size(&m), 1 + 1 + 1 + 2);
        assert_eq!(metric_fx(&m), 4 * 2 + 2);
    }
}
