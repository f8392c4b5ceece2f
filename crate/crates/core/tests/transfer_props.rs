use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sumnet::network::DEFAULT_PATH_LIMIT;
use sumnet::solver::{g1_structured_code, smstar_structured_code};
use sumnet::{
    gen_g1, gen_smstar, is_solution, lift_to_matrix, path_gain, reverse_code, transfer_matrix,
    transfer_via_paths, FiniteField, LinearCode, Matrix, SlotKey, SumNetwork,
};

fn networks() -> Vec<SumNetwork> {
    vec![
        gen_g1(),
        gen_smstar(3).unwrap(),
        gen_smstar(4).unwrap(),
        gen_smstar(5).unwrap(),
    ]
}

const FIELDS: &[(u64, u32)] = &[(2, 1), (3, 1), (2, 2), (5, 1)];

#[test]
fn kernel_and_path_transfer_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for net in networks() {
        for &(p, k) in FIELDS {
            let f = FiniteField::new(p, k).unwrap();
            for n in 1..=2 {
                for _ in 0..25 {
                    let code = LinearCode::random(&net, &f, n, &mut rng).unwrap();
                    let t = transfer_matrix(&net, &code).unwrap();
                    assert_eq!(
                        t,
                        transfer_via_paths(&net, &code, DEFAULT_PATH_LIMIT).unwrap()
                    );
                    assert_eq!(t.is_all_identity(), is_solution(&net, &code).unwrap());
                }
            }
        }
    }
}

#[test]
fn g1_path_gain_example() {
    let f5 = FiniteField::new(5, 1).unwrap();
    let alpha = f5.elem(2).unwrap();
    let code = g1_structured_code(&f5, alpha).unwrap();
    let net = gen_g1();
    let s3 = net.vertex("s3").unwrap();
    let t2 = net.vertex("t2").unwrap();
    let paths = net.enumerate_paths(s3, t2, DEFAULT_PATH_LIMIT).unwrap();
    assert_eq!(paths.len(), 1);
    let names: Vec<&str> = paths[0].vertices.iter().map(|&v| net.name(v)).collect();
    assert_eq!(names, ["s3", "u1", "v1", "t2"]);
    assert_eq!(
        path_gain(&net, &paths[0], &code).unwrap(),
        Matrix::scalar(&f5, 1, alpha)
    );
    let t = transfer_matrix(&net, &code).unwrap();
    assert!(t.block(2, 1).is_identity());
}

#[test]
fn structured_codes_have_identity_transfer() {
    for (p, k) in [(3u64, 1u32), (5, 1), (7, 1), (3, 2)] {
        let f = FiniteField::new(p, k).unwrap();
        for m in [3, 4, 5] {
            if f.char_divides((m - 2) as u64) {
                continue;
            }
            let code = smstar_structured_code(m, &f, 1).unwrap();
            let net = gen_smstar(m).unwrap();
            assert!(transfer_matrix(&net, &code).unwrap().is_all_identity());
        }
    }
}

/// Reusing vector coefficients unchanged on the reverse network gives
/// products in the opposite order, which breaks for non-commuting blocks.
#[test]
fn copying_coefficients_fails_for_noncommuting_blocks() {
    let net = SumNetwork::new(&["s", "a", "t"], &[("s", "a"), ("a", "t")], &["s"], &["t"]).unwrap();
    let f2 = FiniteField::new(2, 1).unwrap();
    let a = Matrix::from_indices(&f2, &[&[1, 1], &[0, 1]]).unwrap();
    let b = Matrix::from_indices(&f2, &[&[1, 0], &[1, 1]]).unwrap();
    let c = b.mul(&a).unwrap().inverse().unwrap();
    let src = SlotKey::Source { source: 0, edge: 0 };
    let loc = SlotKey::Local {
        input: 0,
        output: 1,
    };
    let dec = SlotKey::Decode {
        terminal: 0,
        edge: 1,
    };
    let mut code = LinearCode::new(&f2, 2).unwrap();
    code.set(src, a.clone())
        .set(loc, b.clone())
        .set(dec, c.clone());
    assert!(is_solution(&net, &code).unwrap());

    let rev = net.reverse();
    let mut copied = LinearCode::new(&f2, 2).unwrap();
    copied
        .set(SlotKey::Source { source: 0, edge: 1 }, c)
        .set(
            SlotKey::Local {
                input: 1,
                output: 0,
            },
            b,
        )
        .set(
            SlotKey::Decode {
                terminal: 0,
                edge: 0,
            },
            a,
        );
    assert!(!is_solution(&rev, &copied).unwrap());

    let transposed = reverse_code(&net, &code).unwrap();
    assert!(is_solution(&rev, &transposed).unwrap());
}

#[test]
fn lifted_transfer_blocks_are_lifted_entries() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for (p, n) in [(2u64, 2u32), (2, 3), (3, 2)] {
        let ext = FiniteField::new(p, n).unwrap();
        let base = FiniteField::prime(p).unwrap();
        for net in networks() {
            for _ in 0..10 {
                let scalar = LinearCode::random(&net, &ext, 1, &mut rng).unwrap();
                let mut lifted = LinearCode::new(&base, n as usize).unwrap();
                for (key, m) in scalar.iter() {
                    lifted.set(*key, lift_to_matrix(&ext, m.get(0, 0), &base).unwrap());
                }
                let ts = transfer_matrix(&net, &scalar).unwrap();
                let tl = transfer_matrix(&net, &lifted).unwrap();
                for i in 0..ts.sources() {
                    for j in 0..ts.terminals() {
                        let entry = ts.block(i, j).get(0, 0);
                        assert_eq!(tl.block(i, j), &lift_to_matrix(&ext, entry, &base).unwrap());
                    }
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn reverse_transfer_is_transpose(seed in any::<u64>(), net_idx in 0usize..4, field_idx in 0usize..4, n in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let net = &networks()[net_idx];
        let (p, k) = FIELDS[field_idx];
        let f = FiniteField::new(p, k).unwrap();
        let code = LinearCode::random(net, &f, n, &mut rng).unwrap();
        let rev_net = net.reverse();
        let rev = reverse_code(net, &code).unwrap();
        let t = transfer_matrix(net, &code).unwrap();
        prop_assert_eq!(transfer_matrix(&rev_net, &rev).unwrap(), t.transpose());
        prop_assert_eq!(reverse_code(&rev_net, &rev).unwrap(), code);
    }
}
