#pragma once

#include <boost/multiprecision/miller_rabin.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

#include "repute/common/bigint.hpp"
#include "repute/common/codec.hpp"
#include "repute/common/rng.hpp"

// Paillier encryption with the generator fixed to g = n+1, plus the
// Damgard-Jurik extension at exponent 2 (plaintexts mod n^2, ciphertexts mod
// n^3) under the same keypair. Randomness is explicit everywhere: encryption
// takes the unit r, homomorphic operations combine r multiplicatively, and
// the key holder can recover r from a ciphertext. Since r^n mod n^2 depends
// only on r mod n, units are kept as canonical representatives in [1, n),
// which makes randomness serialization injective.
//
// This is a research artifact: big-integer arithmetic is not constant-time
// and no chosen-ciphertext hardening is attempted.
namespace repute::crypto {

struct CryptoError : std::runtime_error {
    explicit CryptoError(const std::string& what) : std::runtime_error(what) {}
};
struct PrimeGenerationFailure : CryptoError {
    PrimeGenerationFailure() : CryptoError("prime generation failed after bounded retries") {}
};
struct InvalidRandomness : CryptoError {
    InvalidRandomness() : CryptoError("randomness is not a unit modulo the key") {}
};
struct KeyMismatch : CryptoError {
    KeyMismatch() : CryptoError("ciphertexts belong to different keys") {}
};
struct PlaintextMismatch : CryptoError {
    PlaintextMismatch() : CryptoError("ciphertext does not decrypt to the claimed plaintext") {}
};
struct DecryptionFailure : CryptoError {
    explicit DecryptionFailure(const std::string& what) : CryptoError(what) {}
};

struct PublicKey {
    Int n;
    Int g;   // fixed to n + 1
    Int n2;  // n^2
    Int n3;  // n^3

    std::uint64_t tag = 0;  // short fingerprint of n, for key-mismatch checks

    static PublicKey from_modulus(const Int& n) {
        PublicKey pk;
        pk.n = n;
        pk.g = n + 1;
        pk.n2 = n * n;
        pk.n3 = pk.n2 * n;
        pk.tag = derive_seed(0, "REP/KEY/" + to_hex(n));
        return pk;
    }
};

struct SecretKey {
    Int p;
    Int q;
    Int lambda;  // lcm(p-1, q-1)
};

struct Keypair {
    PublicKey pk;
    SecretKey sk;

    // lambda^{-1} mod n and n^{-1} mod lambda, precomputed once
    Int mu;
    Int n_inv_lambda;

    static Keypair from_primes(const Int& p, const Int& q) {
        if (p == q) {
            throw CryptoError("keypair: primes must be distinct");
        }
        if (p < 2 || q < 2 || !is_probable_prime(p) || !is_probable_prime(q)) {
            throw CryptoError("keypair: factors must be prime");
        }
        Int n = p * q;
        if (gcd(n, (p - 1) * (q - 1)) != 1) {
            throw CryptoError("keypair: gcd(n, phi(n)) != 1");
        }
        Keypair kp;
        kp.pk = PublicKey::from_modulus(n);
        kp.sk = {p, q, lcm(p - 1, q - 1)};
        kp.mu = invmod(kp.sk.lambda, n);
        kp.n_inv_lambda = invmod(n, kp.sk.lambda);
        return kp;
    }

    static bool is_probable_prime(const Int& v) {
        std::mt19937_64 aux(0x5eedu);
        return boost::multiprecision::miller_rabin_test(v, 30, aux);
    }
};

namespace detail {

inline Int random_prime(unsigned bits, Rng& rng) {
    if (bits < 8) {
        throw CryptoError("random_prime: too few bits");
    }
    for (int attempt = 0; attempt < 100000; ++attempt) {
        Int c = rng.int_below(Int(1) << bits);
        bit_set(c, bits - 1);
        bit_set(c, 0);
        if (c % 3 == 0 || c % 5 == 0 || c % 7 == 0) {
            continue;
        }
        if (boost::multiprecision::miller_rabin_test(c, 30, rng.engine())) {
            return c;
        }
    }
    throw PrimeGenerationFailure();
}

}  // namespace detail

// deterministic per rng seed; bits is the size of the modulus n
inline Keypair keygen(unsigned bits, Rng& rng) {
    if (bits < 32) {
        throw CryptoError("keygen: modulus below the 32-bit toy floor");
    }
    for (int attempt = 0; attempt < 64; ++attempt) {
        Int p = detail::random_prime(bits / 2, rng);
        Int q = detail::random_prime(bits - bits / 2, rng);
        if (p == q) {
            continue;
        }
        Int n = p * q;
        if (gcd(n, (p - 1) * (q - 1)) != 1) {
            continue;
        }
        return Keypair::from_primes(p, q);
    }
    throw PrimeGenerationFailure();
}

struct PaillierCiphertext {
    Int value;              // element of Z*_{n^2}
    std::uint64_t key_tag = 0;

    bool operator==(const PaillierCiphertext& other) const {
        return value == other.value && key_tag == other.key_tag;
    }
};

struct DJCiphertext {
    Int value;              // element of Z*_{n^3}
    std::uint64_t key_tag = 0;

    bool operator==(const DJCiphertext& other) const {
        return value == other.value && key_tag == other.key_tag;
    }
};

// canonical unit in [1, n)
inline Int random_unit(const PublicKey& pk, Rng& rng) {
    return rng.unit_mod(pk.n);
}

inline void check_unit(const PublicKey& pk, const Int& r) {
    if (r <= 0 || gcd(r % pk.n, pk.n) != 1) {
        throw InvalidRandomness();
    }
}

// g^x mod n^2 with g = n+1 is 1 + xn
inline Int g_pow(const PublicKey& pk, const Int& x) {
    return (1 + (x % pk.n) * pk.n) % pk.n2;
}

inline PaillierCiphertext enc(const PublicKey& pk, const Int& x, const Int& r) {
    if (x < 0 || x >= pk.n) {
        throw CryptoError("enc: plaintext outside [0, n)");
    }
    check_unit(pk, r);
    Int c = mulmod(g_pow(pk, x), powm(r, pk.n, pk.n2), pk.n2);
    return {c, pk.tag};
}

struct FreshCiphertext {
    PaillierCiphertext ciphertext;
    Int randomness;
};

inline FreshCiphertext enc_random(const PublicKey& pk, const Int& x, Rng& rng) {
    Int r = random_unit(pk, rng);
    return {enc(pk, x, r), r};
}

inline Int dec(const Keypair& kp, const PaillierCiphertext& c) {
    if (c.key_tag != 0 && c.key_tag != kp.pk.tag) {
        throw KeyMismatch();
    }
    Int w = powm(c.value, kp.sk.lambda, kp.pk.n2);
    if (w % kp.pk.n != 1) {
        throw DecryptionFailure("dec: ciphertext is not in the valid group");
    }
    Int l = (w - 1) / kp.pk.n;
    return mulmod(l, kp.mu, kp.pk.n);
}

inline PaillierCiphertext add(const PublicKey& pk, const PaillierCiphertext& a,
                              const PaillierCiphertext& b) {
    if (a.key_tag != b.key_tag) {
        throw KeyMismatch();
    }
    return {mulmod(a.value, b.value, pk.n2), a.key_tag};
}

inline PaillierCiphertext smul(const PublicKey& pk, const PaillierCiphertext& c, const Int& k) {
    return {powm_signed(c.value, k, pk.n2), c.key_tag};
}

// the unit r with c = g^x r^n, as its canonical representative in [1, n);
// the n-th root exists because x matches the plaintext
inline Int recover_randomness(const Keypair& kp, const PaillierCiphertext& c, const Int& x) {
    if (x < 0 || x >= kp.pk.n || dec(kp, c) != x) {
        throw PlaintextMismatch();
    }
    Int a = mulmod(c.value, invmod(g_pow(kp.pk, x), kp.pk.n2), kp.pk.n2);
    return powm(a % kp.pk.n, kp.n_inv_lambda, kp.pk.n);
}

// ---- Damgard-Jurik layer: plaintexts in Z_{n^2}, ciphertexts in Z*_{n^3} ----

// (1+n)^x mod n^3 = 1 + xn + C(x,2) n^2, with the quadratic coefficient
// reduced mod n
inline Int dj_g_pow(const PublicKey& pk, const Int& x) {
    Int xr = x % pk.n2;
    Int quad = xr == 0 ? Int(0) : Int((xr * (xr - 1) / 2) % pk.n);
    return (1 + xr * pk.n % pk.n3 + quad * pk.n2) % pk.n3;
}

inline DJCiphertext dj_enc(const PublicKey& pk, const Int& x, const Int& r) {
    if (x < 0 || x >= pk.n2) {
        throw CryptoError("dj_enc: plaintext outside [0, n^2)");
    }
    check_unit(pk, r);
    Int c = mulmod(dj_g_pow(pk, x), powm(r, pk.n2, pk.n3), pk.n3);
    return {c, pk.tag};
}

namespace detail {

// discrete log of (1+n)^y mod n^3 for y in [0, n^2)
inline Int dj_dlog(const PublicKey& pk, const Int& w) {
    if (w % pk.n != 1) {
        throw DecryptionFailure("dj_dlog: value is not a power of 1+n");
    }
    Int a = ((w - 1) / pk.n) % pk.n2;
    Int y1 = a % pk.n;
    Int half = (pk.n + 1) / 2;  // 2^{-1} mod n, n odd
    Int h = mulmod(mulmod(y1, (y1 + pk.n - 1) % pk.n, pk.n), half, pk.n);
    return (a + pk.n2 - h * pk.n % pk.n2) % pk.n2;
}

}  // namespace detail

inline Int dj_dec(const Keypair& kp, const DJCiphertext& c) {
    if (c.key_tag != 0 && c.key_tag != kp.pk.tag) {
        throw KeyMismatch();
    }
    Int w = powm(c.value, kp.sk.lambda, kp.pk.n3);
    Int y = detail::dj_dlog(kp.pk, w);
    return mulmod(y, invmod(kp.sk.lambda, kp.pk.n2), kp.pk.n2);
}

inline DJCiphertext dj_add(const PublicKey& pk, const DJCiphertext& a, const DJCiphertext& b) {
    if (a.key_tag != b.key_tag) {
        throw KeyMismatch();
    }
    return {mulmod(a.value, b.value, pk.n3), a.key_tag};
}

inline DJCiphertext dj_smul(const PublicKey& pk, const DJCiphertext& c, const Int& k) {
    return {powm_signed(c.value, k, pk.n3), c.key_tag};
}

}  // namespace repute::crypto
