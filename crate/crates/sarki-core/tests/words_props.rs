mod common;

use common::{reduce_shuffled, WordGen};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sarki_core::words::{compose_check, phi};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn homomorphism(seed in any::<u64>(), l1 in 0usize..25, l2 in 0usize..25) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (w1, w2) = WordGen::new().pair(&mut rng, l1, l2);
        let w = w1.concat(&w2);
        prop_assert!(compose_check(&w));
        prop_assert_eq!(phi(&w).unwrap(), phi(&w1).unwrap().mul(&phi(&w2).unwrap()));
    }

    #[test]
    fn inverse_cancels(seed in any::<u64>(), len in 0usize..30) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = WordGen::new().word(&mut rng, len);
        let q = phi(&w.concat(&w.inverse())).unwrap();
        prop_assert!(q.is_identity());
        prop_assert_eq!(phi(&w.inverse()).unwrap(), phi(&w).unwrap().inverse());
    }

    #[test]
    fn confluence(seed in any::<u64>(), len in 0usize..40) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = WordGen::new().word(&mut rng, len);
        let q = phi(&w).unwrap();
        prop_assert_eq!(reduce_shuffled(&mut rng, &w.letters), q.clone());
        for (i, (f, set)) in q.0.iter().enumerate() {
            prop_assert!(!set.is_empty());
            if i > 0 {
                prop_assert_ne!(&q.0[i - 1].0, f);
            }
        }
    }
}
