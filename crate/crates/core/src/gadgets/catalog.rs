use super::{GadgetClaim, GadgetLemma};
use crate::poset::{KType, PairRelation};

/// The eight Boolean patterns of (c1,c2,c3), each with its NAE membership.
pub fn one_in_three_patterns() -> Vec<([bool; 3], bool)> {
    (0..8u8)
        .map(|m| {
            let bits = [m & 1 != 0, m & 2 != 0, m & 4 != 0];
            let nae = bits.iter().any(|&b| b) && !bits.iter().all(|&b| b);
            (bits, nae)
        })
        .collect()
}

/// Expected formula for the NAE criterion: value 0 means below a, 1 below b.
fn nae_expected() -> String {
    let vars = ["c1", "c2", "c3"];
    one_in_three_patterns()
        .into_iter()
        .filter(|&(_, nae)| nae)
        .map(|(bits, _)| {
            let parts: Vec<String> = bits
                .iter()
                .zip(vars)
                .map(|(&b, v)| format!("{v} < {}", if b { "b" } else { "a" }))
                .collect();
            format!("({})", parts.join(" & "))
        })
        .collect::<Vec<_>>()
        .join(" | ")
}

fn lemma(name: &str, constants: &[&str], pinned: KType, claims: Vec<GadgetClaim>) -> GadgetLemma {
    GadgetLemma {
        name: name.to_string(),
        constants: constants.iter().map(|s| s.to_string()).collect(),
        pinned,
        claims,
    }
}

fn chain(n: usize) -> KType {
    KType::chain(n)
}

/// The fixed gadget suite.
pub fn builtin_catalog() -> Vec<GadgetLemma> {
    let none = KType::diagonal(0);
    vec![
        lemma(
            "lowbot",
            &[],
            none.clone(),
            vec![GadgetClaim::new(
                "lowbot",
                &["<", "#"],
                &["x", "y"],
                "exists z . z < y & z # x",
                "x < y | x # y",
            )],
        ),
        lemma(
            "cycl-incomparability",
            &[],
            none.clone(),
            vec![GadgetClaim::new(
                "incomparable",
                &["<", "Cycl"],
                &["x", "y"],
                "exists a b c d . x < a & a < c & x < b & b < d & y < c & y < d \
                 & Cycl(x,a,y) & Cycl(x,b,y) & Cycl(y,c,b) & Cycl(y,d,a) & Cycl(b,d,c) & Cycl(a,c,d)",
                "x # y",
            )],
        ),
        lemma(
            "cycl-interval",
            &["s", "t"],
            chain(2),
            vec![
                GadgetClaim::new("interval", &["Cycl"], &["x"], "Cycl(s,x,t)", "s < x & x < t"),
                GadgetClaim::new(
                    "order",
                    &["Cycl"],
                    &["y", "z"],
                    "Cycl(s,y,t) & Cycl(s,z,t) & Cycl(y,z,t)",
                    "s < y & y < t & s < z & z < t & y < z",
                ),
            ],
        ),
        lemma(
            "abv-u",
            &[],
            none.clone(),
            vec![
                GadgetClaim::new(
                    "phi",
                    &["Low", "#"],
                    &["x", "y", "z", "v"],
                    "exists u . u # v & Low(u,y,z) & Low(y,x,v) & Low(z,x,v)",
                    "v # x & y # z & (y < x | z < x) & !(y < v & z < v) \
                     & ((y < x & y # v) | (y < v & y # x)) & ((z < x & z # v) | (z < v & z # x))",
                ),
                GadgetClaim::new(
                    "Abv",
                    &["Low", "#"],
                    &["x", "y", "z"],
                    "exists v1 v2 u1 u2 . u1 # v1 & Low(u1,y,z) & Low(y,x,v1) & Low(z,x,v1) \
                     & u2 # x & Low(u2,y,z) & Low(y,v2,x) & Low(z,v2,x)",
                    "Abv(x,y,z)",
                ),
                GadgetClaim::new(
                    "U",
                    &["Low", "#"],
                    &["x", "y", "z"],
                    "exists v u . u # v & Low(u,y,z) & Low(y,x,v) & Low(z,x,v)",
                    "U(x,y,z)",
                ),
            ],
        ),
        lemma(
            "low-s-interdef",
            &[],
            none.clone(),
            vec![
                GadgetClaim::new("Low from S", &["S", "#"], &["x", "y", "z"], "S(x,y,x,z) & y # z", "Low(x,y,z)"),
                GadgetClaim::new(
                    "S from Low",
                    &["Low", "Abv"],
                    &["x1", "x2", "y1", "y2"],
                    "exists u v w . Low(x1,x2,u) & Abv(u,x1,v) & Low(v,u,w) & Abv(w,y1,v) & Low(y1,y2,w)",
                    "S(x1,x2,y1,y2)",
                ),
            ],
        ),
        lemma(
            "one-in-three",
            &["a", "b"],
            KType::pair(PairRelation::Inc),
            vec![
                GadgetClaim::new("domain", &["Low"], &["x"], "Low(x,a,b)", "(x < a | x < b) & !(x < a & x < b)"),
                GadgetClaim::new(
                    "parts",
                    &["Low", "<"],
                    &["x", "y"],
                    "Low(x,a,b) & Low(y,a,b) & x < a & y < b",
                    "x < a & y < b & x # y & x # b & y # a",
                ),
                GadgetClaim::new(
                    "R",
                    &["Abv", "U"],
                    &["x", "y", "z", "t"],
                    "exists u v . Abv(x,u,v) & U(x,y,u) & U(x,z,u) & U(x,t,v)",
                    "(y < x | z < x | t < x) & !(x <= y) & !(x <= z) & !(x <= t)",
                ),
                GadgetClaim::new(
                    "NAE",
                    &["Abv", "U"],
                    &["c1", "c2", "c3"],
                    "exists u1 v1 u2 v2 . Abv(a,u1,v1) & U(a,c1,u1) & U(a,c2,u1) & U(a,c3,v1) \
                     & Abv(b,u2,v2) & U(b,c1,u2) & U(b,c2,u2) & U(b,c3,v2)",
                    &nae_expected(),
                )
                .within("Low(c1,a,b) & Low(c2,a,b) & Low(c3,a,b)"),
            ],
        ),
        lemma(
            "betw-order",
            &["u", "v"],
            chain(2),
            vec![GadgetClaim::new(
                "order",
                &["Betw"],
                &["x", "y"],
                "exists a b . Betw(x,y,a) & Betw(y,a,b) & Betw(u,v,a) & Betw(v,a,b)",
                "x < y",
            )],
        ),
        lemma(
            "sep-interval",
            &["c", "d", "u"],
            chain(3),
            vec![
                GadgetClaim::new("interval", &["Sep"], &["x"], "Sep(c,d,x,u)", "d < x & x < u"),
                GadgetClaim::new(
                    "order",
                    &["Sep"],
                    &["x", "y"],
                    "Sep(c,d,x,u) & Sep(c,d,y,u) & Sep(c,d,x,y)",
                    "d < x & x < u & d < y & y < u & x < y",
                ),
                GadgetClaim::new(
                    "Cycl",
                    &["Sep"],
                    &["x", "y", "z"],
                    "Sep(c,d,x,u) & Sep(c,d,y,u) & Sep(c,d,z,u) & Sep(c,x,y,z)",
                    "d < x & x < u & d < y & y < u & d < z & z < u & Cycl(x,y,z)",
                ),
            ],
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse_pp, parse_qf, SignatureEnv};

    #[test]
    fn catalog_shape() {
        let cat = builtin_catalog();
        assert_eq!(cat.len(), 8);
        let env = SignatureEnv::standard();
        for g in &cat {
            assert!(g.pinned.is_valid());
            for c in &g.claims {
                let vars: Vec<&str> = g.constants.iter().chain(&c.free).map(String::as_str).collect();
                let rels: Vec<&str> = c.relations.iter().map(String::as_str).collect();
                let sub = env.restricted(&rels).unwrap();
                parse_pp(&c.formula, &vars, &sub).unwrap();
                parse_qf(&c.expected, &vars, env).unwrap();
            }
        }
    }

    #[test]
    fn nae_has_six_patterns() {
        let p = one_in_three_patterns();
        assert_eq!(p.len(), 8);
        assert_eq!(p.iter().filter(|(_, v)| *v).count(), 6);
        assert!(!p[0].1 && !p[7].1);
    }
}
