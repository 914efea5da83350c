use pnc::mapping::{
    bpsk_modulate, pam_code_add, pam_modulate, pam_pnc_demap, pnc_demap_bpsk_sum, verify_mapping, MappingCheck,
    PncScheme,
};

fn table(scheme: &PncScheme) -> pnc::mapping::DemodTable {
    match verify_mapping(scheme).unwrap() {
        MappingCheck::Valid(t) => t,
        MappingCheck::Violation(v) => panic!("unexpected violation: {v}"),
    }
}

#[test]
fn bpsk_table_rows() {
    // (s1, s3, a1, a3, a1+a3, s2, a2)
    let rows = [
        (1, 1, 1.0, 1.0, 2.0, 0, -1.0),
        (0, 1, -1.0, 1.0, 0.0, 1, 1.0),
        (1, 0, 1.0, -1.0, 0.0, 1, 1.0),
        (0, 0, -1.0, -1.0, -2.0, 0, -1.0),
    ];
    let scheme = PncScheme::bpsk_xor().verified().unwrap();
    for (s1, s3, a1, a3, sum, s2, a2) in rows {
        assert_eq!(bpsk_modulate(s1 == 1), a1);
        assert_eq!(bpsk_modulate(s3 == 1), a3);
        assert_eq!(a1 + a3, sum);
        assert_eq!(pnc_demap_bpsk_sum(sum).unwrap(), s2);
        assert_eq!(scheme.demodulate(sum), Some(s2 as usize));
        assert_eq!(bpsk_modulate(s2 == 1), a2);
    }
}

#[test]
fn four_pam_table_rows() {
    #[rustfmt::skip]
    let rows: [(usize, usize, f64, f64, f64, usize); 16] = [
        (0, 0, -3.0, -3.0, -6.0, 0), (0, 1, -3.0, -1.0, -4.0, 1),
        (0, 2, -3.0, 1.0, -2.0, 2), (0, 3, -3.0, 3.0, 0.0, 3),
        (1, 0, -1.0, -3.0, -4.0, 1), (1, 1, -1.0, -1.0, -2.0, 2),
        (1, 2, -1.0, 1.0, 0.0, 3), (1, 3, -1.0, 3.0, 2.0, 0),
        (2, 0, 1.0, -3.0, -2.0, 2), (2, 1, 1.0, -1.0, 0.0, 3),
        (2, 2, 1.0, 1.0, 2.0, 0), (2, 3, 1.0, 3.0, 4.0, 1),
        (3, 0, 3.0, -3.0, 0.0, 3), (3, 1, 3.0, -1.0, 2.0, 0),
        (3, 2, 3.0, 1.0, 4.0, 1), (3, 3, 3.0, 3.0, 6.0, 2),
    ];
    let scheme = PncScheme::pam(4).unwrap().verified().unwrap();
    for (mi, mj, ei, ej, sum, h) in rows {
        assert_eq!(pam_modulate(mi, 4).unwrap(), ei);
        assert_eq!(pam_modulate(mj, 4).unwrap(), ej);
        assert_eq!(ei + ej, sum);
        assert_eq!(scheme.demodulate(sum), Some(h), "e = {sum}");
        assert_eq!(pam_pnc_demap(sum, 4).unwrap(), h);
        assert_eq!(pam_code_add(mi, mj, 4).unwrap(), h);
    }
}

#[test]
fn demod_map_exists_for_pam_sizes() {
    for l in [2, 4, 8, 16] {
        let scheme = PncScheme::pam(l).unwrap();
        let t = table(&scheme);
        assert_eq!(t.len(), 2 * l - 1, "L={l}");
        // brute force over all pair-of-pairs
        for i in 0..l {
            for j in 0..l {
                for p in 0..l {
                    for q in 0..l {
                        let same_e = scheme.modulate(i).unwrap() + scheme.modulate(j).unwrap()
                            == scheme.modulate(p).unwrap() + scheme.modulate(q).unwrap();
                        if same_e {
                            assert_eq!(scheme.code_add(i, j).unwrap(), scheme.code_add(p, q).unwrap());
                        }
                    }
                }
            }
        }
        for e in t.entries() {
            assert_eq!(pam_pnc_demap(e.superposition, l).unwrap(), e.symbol, "L={l}, e={}", e.superposition);
        }
    }
}

#[test]
fn mapping_requirement_exhaustive() {
    for l in [2, 4, 8] {
        let scheme = PncScheme::pam(l).unwrap().verified().unwrap();
        for i in 0..l {
            for j in 0..l {
                let e = scheme.modulate(i).unwrap() + scheme.modulate(j).unwrap();
                assert_eq!(scheme.demodulate(e), Some(scheme.code_add(i, j).unwrap()));
            }
        }
    }
}

#[test]
fn representative_choice_is_immaterial() {
    let scheme = PncScheme::pam(8).unwrap();
    let t = table(&scheme);
    for entry in t.entries() {
        let (ri, rj) = entry.representative;
        assert_eq!(scheme.modulate(ri).unwrap() + scheme.modulate(rj).unwrap(), entry.superposition);
        for i in 0..8 {
            for j in 0..8 {
                if scheme.modulate(i).unwrap() + scheme.modulate(j).unwrap() == entry.superposition {
                    assert_eq!(scheme.code_add(i, j).unwrap(), entry.symbol);
                    assert!((ri, rj) <= (i, j));
                }
            }
        }
    }
}

#[test]
fn bitwise_xor_pam_violation() {
    let scheme = PncScheme::pam_bitwise_xor(4).unwrap();
    let MappingCheck::Violation(v) = verify_mapping(&scheme).unwrap() else {
        panic!("4-PAM with bitwise XOR must not admit a demodulation map");
    };
    assert_eq!(v.first, (0, 2));
    assert_eq!(v.second, (1, 1));
    assert_eq!(v.superposition, -2.0);
    assert_eq!((v.first_code, v.second_code), (2, 0));
}

#[test]
fn bpsk_xor_for_every_bit_pair() {
    for b1 in [false, true] {
        for b3 in [false, true] {
            let s = bpsk_modulate(b1) + bpsk_modulate(b3);
            assert_eq!(pnc_demap_bpsk_sum(s).unwrap(), u8::from(b1 ^ b3));
        }
    }
}
