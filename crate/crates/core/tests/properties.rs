use dynstr::compress::format;
use dynstr::{
    build_bwt, invert_bwt, lz77_decode, lz77_factorize, BwtMode, DynBitvector, DynString, GapBitvector, Lz77Factor,
    RleFmIndex, RleString, SpsiConfig, SpsiTree, SuccinctBitvector, Symbol, WaveletString, WtFmIndex,
};
use proptest::prelude::*;

#[derive(Debug, Clone)]
enum SpsiOp {
    Insert(prop::sample::Index, u64),
    Update(prop::sample::Index, i64),
}

fn spsi_ops() -> impl Strategy<Value = Vec<SpsiOp>> {
    prop::collection::vec(
        prop_oneof![
            3 => (any::<prop::sample::Index>(), prop_oneof![Just(0u64), 1u64..300, 1u64..u32::MAX as u64])
                .prop_map(|(i, v)| SpsiOp::Insert(i, v)),
            1 => (any::<prop::sample::Index>(), -500i64..500).prop_map(|(i, d)| SpsiOp::Update(i, d)),
        ],
        0..2000,
    )
}

fn naive_bwt(text: &[u8]) -> Vec<Option<u8>> {
    let mut sa: Vec<usize> = (0..=text.len()).collect();
    sa.sort_by(|&a, &b| text[a..].cmp(&text[b..]));
    sa.iter().map(|&p| p.checked_sub(1).map(|q| text[q])).collect()
}

fn small_text(max: usize) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(prop::sample::select(b"abcd".to_vec()), 1..max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn spsi_counters_and_sums(ops in spsi_ops(), small in any::<bool>()) {
        let config = if small { SpsiConfig::new(3, 4) } else { SpsiConfig::PACKED };
        let mut t = SpsiTree::new(config);
        let mut v: Vec<u64> = Vec::new();
        for op in ops {
            match op {
                SpsiOp::Insert(i, x) => {
                    let i = i.index(v.len() + 1);
                    t.insert(i, x);
                    v.insert(i, x);
                }
                SpsiOp::Update(i, d) if !v.is_empty() => {
                    let i = i.index(v.len());
                    let res = t.update(i, d);
                    prop_assert_eq!(res.is_ok(), v[i] as i64 + d >= 0);
                    if res.is_ok() {
                        v[i] = (v[i] as i64 + d) as u64;
                    }
                }
                SpsiOp::Update(..) => {}
            }
        }
        prop_assert_eq!(t.to_vec(), v.clone());
        prop_assert_eq!(t.total(), v.iter().sum::<u64>());
        prop_assert!(t.validate().is_ok());
        prop_assert_eq!(t.audit_bits(), t.recount_bits());
        let mut acc = 0;
        for (i, &x) in v.iter().enumerate() {
            prop_assert_eq!(t.sum(i), acc);
            if x > 0 {
                prop_assert_eq!(t.search(acc), Some(i));
            }
            acc += x;
        }
        prop_assert_eq!(t.search(acc), None);
    }

    #[test]
    fn bitvector_rank_select_inverse(bits in prop::collection::vec(any::<bool>(), 0..3000)) {
        fn check<B: DynBitvector>(bits: &[bool]) -> Result<(), TestCaseError> {
            let b = B::from_bits(bits);
            prop_assert_eq!(b.to_bits(), bits.to_vec());
            for bit in [false, true] {
                let count = b.rank(b.len(), bit);
                for j in 0..count {
                    let p = b.select(j, bit).unwrap();
                    prop_assert_eq!(b.rank(p, bit), j);
                    prop_assert_eq!(b.access(p), bit);
                }
                prop_assert_eq!(b.select(count, bit), None);
            }
            Ok(())
        }
        check::<GapBitvector>(&bits)?;
        check::<SuccinctBitvector>(&bits)?;
    }

    #[test]
    fn strings_agree_and_runs_stay_maximal(ops in prop::collection::vec((any::<prop::sample::Index>(), 0u32..4), 1..1500)) {
        let mut w = WaveletString::default();
        let mut r = RleString::default();
        let mut v: Vec<Symbol> = Vec::new();
        for (i, c) in ops {
            let i = i.index(v.len() + 1);
            w.insert(i, c).unwrap();
            r.insert(i, c).unwrap();
            v.insert(i, c);
        }
        prop_assert_eq!(w.to_vec(), v.clone());
        prop_assert_eq!(r.to_vec(), v.clone());
        prop_assert_eq!(r.runs(), dynstr::bounds::runs(&v));
        prop_assert!(r.validate().is_ok());
        prop_assert!(w.validate().is_ok());
        let total: usize = (0..5).map(|c| r.rank(v.len(), c).unwrap()).sum();
        prop_assert_eq!(total, v.len());
        for c in 0..5 {
            for i in (0..=v.len()).step_by(7) {
                prop_assert_eq!(w.rank(i, c).unwrap(), r.rank(i, c).unwrap());
            }
            let count = w.rank(v.len(), c).unwrap();
            for j in 0..count {
                let p = r.select(j, c).unwrap();
                prop_assert_eq!(w.select(j, c).unwrap(), p);
                prop_assert_eq!(r.rank(p, c).unwrap(), j);
            }
        }
    }

    #[test]
    fn bwt_matches_suffix_sort(text in prop::collection::vec(any::<u8>(), 1..400)) {
        let want = naive_bwt(&text);
        for mode in [BwtMode::Rle, BwtMode::Wavelet] {
            let out = build_bwt(&text, mode).unwrap();
            prop_assert_eq!(&out.bwt, &want);
            prop_assert_eq!(invert_bwt(&out.bwt).unwrap(), text.clone());
            prop_assert_eq!(format::decode_bwt(&format::encode_bwt(&out.bwt)).unwrap(), out.bwt);
        }
    }

    #[test]
    fn lf_walk_spells_text(text in small_text(200)) {
        let mut f = WtFmIndex::wavelet(4);
        f.prepend(&text).unwrap();
        let bwt = f.bwt();
        prop_assert_eq!(bwt.text(), text.clone());
        let mut seen = vec![false; bwt.len()];
        let mut row = bwt.terminator_row();
        for _ in 0..bwt.len() {
            prop_assert!(!seen[row]);
            seen[row] = true;
            row = bwt.lf(row);
        }
        prop_assert_eq!(row, bwt.terminator_row());
    }

    #[test]
    fn count_equals_locate_len(text in small_text(300), k in 1usize..20, patterns in prop::collection::vec(small_text(6), 1..20)) {
        let mut a = WtFmIndex::wavelet(k);
        let mut b = RleFmIndex::rle(k);
        a.prepend(&text).unwrap();
        b.prepend(&text).unwrap();
        for p in &patterns {
            let la = a.locate(p);
            prop_assert_eq!(a.count(p), la.len());
            prop_assert!(la.windows(2).all(|w| w[0] < w[1]));
            prop_assert_eq!(&b.locate(p), &la);
            for &pos in &la {
                prop_assert_eq!(&text[pos..pos + p.len()], &p[..]);
            }
        }
    }

    #[test]
    fn lz77_round_trips(text in prop::collection::vec(prop_oneof![Just(b'x'), Just(b'y'), any::<u8>()], 1..800)) {
        let out = lz77_factorize(&text).unwrap();
        prop_assert_eq!(lz77_decode(&out.factors).unwrap(), text.clone());
        let mut covered = 0;
        for f in &out.factors {
            prop_assert_eq!(f.source.is_none(), f.length == 0);
            if let Some(s) = f.source {
                prop_assert!(s + f.length <= covered);
            }
            covered += f.length + 1;
        }
        let encoded = format::encode_factors(&out.factors);
        prop_assert_eq!(format::decode_factors(&encoded).unwrap(), out.factors);
    }

    #[test]
    fn outputs_are_deterministic(text in small_text(300)) {
        prop_assert_eq!(build_bwt(&text, BwtMode::Rle).unwrap(), build_bwt(&text, BwtMode::Rle).unwrap());
        prop_assert_eq!(lz77_factorize(&text).unwrap(), lz77_factorize(&text).unwrap());
    }
}

#[test]
fn decode_of_literals_only() {
    let f: Vec<Lz77Factor> = b"xyz".iter().map(|&c| Lz77Factor::literal(c)).collect();
    assert_eq!(lz77_decode(&f).unwrap(), b"xyz");
}
