use dynstr::fm::DynamicBwt;
use dynstr::{invert_bwt, PrefixCode, WaveletString};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn naive_bwt(text: &[u8]) -> Vec<Option<u8>> {
    let mut sa: Vec<usize> = (0..=text.len()).collect();
    sa.sort_by(|&a, &b| text[a..].cmp(&text[b..]));
    sa.iter().map(|&p| p.checked_sub(1).map(|q| text[q])).collect()
}

fn left_extension_bwt(text: &[u8]) -> Vec<Option<u8>> {
    let code = PrefixCode::fixed(&[97, 98, 99, 100]).unwrap();
    let mut b = DynamicBwt::new(WaveletString::new(code));
    b.prepend(text).unwrap();
    b.to_vec()
}

#[test]
fn every_string_over_four_letters_up_to_ten() {
    let mut text = Vec::with_capacity(10);
    for len in 0..=10u32 {
        for code in 0..4usize.pow(len) {
            text.clear();
            text.extend((0..len).map(|k| b'a' + (code >> (2 * k) & 3) as u8));
            assert_eq!(left_extension_bwt(&text), naive_bwt(&text), "{:?}", String::from_utf8_lossy(&text));
        }
    }
}

#[test]
fn random_strings_of_length_one_thousand() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..100 {
        let text: Vec<u8> = (0..1000).map(|_| b"abcd"[rng.gen_range(0..4)]).collect();
        let bwt = left_extension_bwt(&text);
        assert_eq!(bwt, naive_bwt(&text));
        assert_eq!(invert_bwt(&bwt).unwrap(), text);
    }
}
