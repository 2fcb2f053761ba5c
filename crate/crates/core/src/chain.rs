//! Sparse integer chains and cochains keyed by any ordered cell type.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Sparse integer combination of cells of one degree. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain<K: Ord> {
    pub degree: usize,
    coeffs: BTreeMap<K, BigInt>,
}

impl<K: Ord + Clone> Chain<K> {
    pub fn zero(degree: usize) -> Self {
        Chain { degree, coeffs: BTreeMap::new() }
    }

    pub fn from_terms<I: IntoIterator<Item = (K, BigInt)>>(degree: usize, terms: I) -> Self {
        let mut c = Chain::zero(degree);
        for (k, v) in terms {
            c.add_term(k, v);
        }
        c
    }

    pub fn add_term(&mut self, key: K, value: BigInt) {
        if value.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&key) {
            Some(v) => {
                *v += value;
                if v.is_zero() {
                    self.coeffs.remove(&key);
                }
            }
            None => {
                self.coeffs.insert(key, value);
            }
        }
    }

    pub fn get(&self, key: &K) -> BigInt {
        self.coeffs.get(key).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &BigInt)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, s: &BigInt) -> Self {
        Chain::from_terms(self.degree, self.coeffs.iter().map(|(k, v)| (k.clone(), v * s)))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in other.iter() {
            out.add_term(k.clone(), v.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-BigInt::one()))
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.coeffs.keys()
    }
}

/// Serde helpers writing integers as JSON numbers when they fit in i64, strings otherwise.
pub mod bigjson {
    use num_bigint::BigInt;
    use num_traits::ToPrimitive;
    use serde::de::{self, Deserializer, Visitor};
    use serde::ser::Serializer;
    use serde::{Deserialize, Serialize};
    use std::fmt;
    use std::str::FromStr;

    #[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
    pub struct Big(pub BigInt);

    impl Serialize for Big {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            match self.0.to_i64() {
                Some(v) => s.serialize_i64(v),
                None => s.serialize_str(&self.0.to_string()),
            }
        }
    }

    struct BigVisitor;

    impl<'de> Visitor<'de> for BigVisitor {
        type Value = Big;
        fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
            f.write_str("an integer or a decimal string")
        }
        fn visit_i64<E: de::Error>(self, v: i64) -> Result<Big, E> {
            Ok(Big(BigInt::from(v)))
        }
        fn visit_u64<E: de::Error>(self, v: u64) -> Result<Big, E> {
            Ok(Big(BigInt::from(v)))
        }
        fn visit_str<E: de::Error>(self, v: &str) -> Result<Big, E> {
            BigInt::from_str(v.trim()).map(Big).map_err(|_| E::custom("bad integer string"))
        }
    }

    impl<'de> Deserialize<'de> for Big {
        fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Big, D::Error> {
            d.deserialize_any(BigVisitor)
        }
    }

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        Big(v.clone()).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        Big::deserialize(d).map(|b| b.0)
    }

    pub mod vec {
        use super::Big;
        use num_bigint::BigInt;
        use serde::{Deserialize, Deserializer, Serialize, Serializer};

        pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
            let w: Vec<Big> = v.iter().cloned().map(Big).collect();
            w.serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
            let w: Vec<Big> = Vec::deserialize(d)?;
            Ok(w.into_iter().map(|b| b.0).collect())
        }
    }
}
