//! 128-bit message digests and the two-bit symbol alphabet they map onto.
//!
//! The digest is MD5 (RFC 1321). MD5 is collision-broken; it is kept here
//! because the code layer only needs a fixed 16-byte fingerprint for tamper
//! evidence, not collision resistance.

/// Number of two-bit symbols in one digest: (16 × 8) / 2.
pub const PAIR_COUNT: usize = 64;

// Per-round shift amounts.
const S: [u32; 64] = [
    7, 12, 17, 22, 7, 12, 17, 22, 7, 12, 17, 22, 7, 12, 17, 22, //
    5, 9, 14, 20, 5, 9, 14, 20, 5, 9, 14, 20, 5, 9, 14, 20, //
    4, 11, 16, 23, 4, 11, 16, 23, 4, 11, 16, 23, 4, 11, 16, 23, //
    6, 10, 15, 21, 6, 10, 15, 21, 6, 10, 15, 21, 6, 10, 15, 21,
];

// K[i] = floor(2^32 * |sin(i + 1)|).
const K: [u32; 64] = [
    0xd76aa478, 0xe8c7b756, 0x242070db, 0xc1bdceee, 0xf57c0faf, 0x4787c62a, 0xa8304613, 0xfd469501,
    0x698098d8, 0x8b44f7af, 0xffff5bb1, 0x895cd7be, 0x6b901122, 0xfd987193, 0xa679438e, 0x49b40821,
    0xf61e2562, 0xc040b340, 0x265e5a51, 0xe9b6c7aa, 0xd62f105d, 0x02441453, 0xd8a1e681, 0xe7d3fbc8,
    0x21e1cde6, 0xc33707d6, 0xf4d50d87, 0x455a14ed, 0xa9e3e905, 0xfcefa3f8, 0x676f02d9, 0x8d2a4c8a,
    0xfffa3942, 0x8771f681, 0x6d9d6122, 0xfde5380c, 0xa4beea44, 0x4bdecfa9, 0xf6bb4b60, 0xbebfbc70,
    0x289b7ec6, 0xeaa127fa, 0xd4ef3085, 0x04881d05, 0xd9d4d039, 0xe6db99e5, 0x1fa27cf8, 0xc4ac5665,
    0xf4292244, 0x432aff97, 0xab9423a7, 0xfc93a039, 0x655b59c3, 0x8f0ccc92, 0xffeff47d, 0x85845dd1,
    0x6fa87e4f, 0xfe2ce6e0, 0xa3014314, 0x4e0811a1, 0xf7537e82, 0xbd3af235, 0x2ad7d2bb, 0xeb86d391,
];

/// MD5 per RFC 1321: padding, 64-bit length append, four-round compression.
pub fn md5(message: &[u8]) -> [u8; 16] {
    let bit_len = (message.len() as u64).wrapping_mul(8);
    let mut data = message.to_vec();
    data.push(0x80);
    while data.len() % 64 != 56 {
        data.push(0);
    }
    data.extend_from_slice(&bit_len.to_le_bytes());

    let mut h: [u32; 4] = [0x67452301, 0xefcdab89, 0x98badcfe, 0x10325476];
    for block in data.chunks_exact(64) {
        let mut m = [0u32; 16];
        for (i, word) in block.chunks_exact(4).enumerate() {
            m[i] = u32::from_le_bytes(word.try_into().unwrap());
        }
        let (mut a, mut b, mut c, mut d) = (h[0], h[1], h[2], h[3]);
        for i in 0..64 {
            let (f, g) = match i / 16 {
                0 => ((b & c) | (!b & d), i),
                1 => ((d & b) | (!d & c), (5 * i + 1) % 16),
                2 => (b ^ c ^ d, (3 * i + 5) % 16),
                _ => (c ^ (b | !d), (7 * i) % 16),
            };
            let rotated = a
                .wrapping_add(f)
                .wrapping_add(K[i])
                .wrapping_add(m[g])
                .rotate_left(S[i]);
            a = d;
            d = c;
            c = b;
            b = b.wrapping_add(rotated);
        }
        h[0] = h[0].wrapping_add(a);
        h[1] = h[1].wrapping_add(b);
        h[2] = h[2].wrapping_add(c);
        h[3] = h[3].wrapping_add(d);
    }

    let mut out = [0u8; 16];
    for (i, word) in h.iter().enumerate() {
        out[i * 4..i * 4 + 4].copy_from_slice(&word.to_le_bytes());
    }
    out
}

/// 32-character lowercase hex rendering, the form used in all reports.
pub fn digest_hex(digest: &[u8; 16]) -> String {
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Splits a digest into 64 two-bit symbols, MSB-first within each byte.
pub fn digest_to_pairs(digest: &[u8; 16]) -> [u8; PAIR_COUNT] {
    let mut pairs = [0u8; PAIR_COUNT];
    for (i, &byte) in digest.iter().enumerate() {
        pairs[i * 4] = byte >> 6;
        pairs[i * 4 + 1] = (byte >> 4) & 3;
        pairs[i * 4 + 2] = (byte >> 2) & 3;
        pairs[i * 4 + 3] = byte & 3;
    }
    pairs
}

/// Reassembles 64 two-bit symbols into the 16-byte digest.
pub fn pairs_to_digest(pairs: &[u8; PAIR_COUNT]) -> [u8; 16] {
    let mut digest = [0u8; 16];
    for (i, chunk) in pairs.chunks_exact(4).enumerate() {
        digest[i] = (chunk[0] & 3) << 6 | (chunk[1] & 3) << 4 | (chunk[2] & 3) << 2 | (chunk[3] & 3);
    }
    digest
}

/// Magnitude level for a two-bit symbol: `value(pair) · scale` with value
/// in {0, 1, 2, 3}. With the default float-mode scale 1e-4 the alphabet is
/// {0, 0.0001, 0.0002, 0.0003}.
pub fn pair_to_level(pair: u8, scale: f64) -> f64 {
    debug_assert!(pair < 4, "two-bit symbol out of range: {pair}");
    (pair & 3) as f64 * scale
}

/// Nearest-level decode: `clamp(round(magnitude / scale), 0, 3)`.
/// Tolerant to perturbations below half a level step.
pub fn level_to_pair(magnitude: f64, scale: f64) -> u8 {
    debug_assert!(scale > 0.0);
    (magnitude / scale).round().clamp(0.0, 3.0) as u8
}
