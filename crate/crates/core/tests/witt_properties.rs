mod common;

use common::{ghost_laws, ring_laws};
use proptest::prelude::*;

const CASES: u32 = 10_000;

macro_rules! suite {
    ($name:ident, $ghost:ident, $p:expr, $n:expr) => {
        proptest! {
            #![proptest_config(ProptestConfig { cases: CASES, failure_persistence: None, ..ProptestConfig::default() })]
            #[test]
            fn $name(a in prop::collection::vec(0u64..1000, $n), b in prop::collection::vec(0u64..1000, $n), c in prop::collection::vec(0u64..1000, $n)) {
                ring_laws($p, $n, &a, &b, &c);
            }

            #[test]
            fn $ghost(a in prop::collection::vec(-20i64..20, $n), b in prop::collection::vec(-20i64..20, $n)) {
                ghost_laws($p, $n, &a, &b);
            }
        }
    };
}

suite!(ring_laws_p2_n2, ghost_over_z_p2_n2, 2, 2);
suite!(ring_laws_p2_n3, ghost_over_z_p2_n3, 2, 3);
suite!(ring_laws_p3_n2, ghost_over_z_p3_n2, 3, 2);
suite!(ring_laws_p3_n3, ghost_over_z_p3_n3, 3, 3);
suite!(ring_laws_p5_n2, ghost_over_z_p5_n2, 5, 2);
suite!(ring_laws_p5_n3, ghost_over_z_p5_n3, 5, 3);
