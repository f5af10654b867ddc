//! Length-tagged complex vectors for symbols and time samples.

use std::ops::{Deref, DerefMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

macro_rules! complex_vector {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq, Default)]
        pub struct $name(Vec<Complex64>);

        impl $name {
            pub fn new(values: Vec<Complex64>) -> Self {
                Self(values)
            }

            pub fn zeros(len: usize) -> Self {
                Self(vec![Complex64::new(0.0, 0.0); len])
            }

            pub fn as_slice(&self) -> &[Complex64] {
                &self.0
            }

            pub fn into_inner(self) -> Vec<Complex64> {
                self.0
            }

            /// Fail with [`Error::Dimension`] unless the length is `expected`.
            pub fn check_len(&self, expected: usize) -> Result<()> {
                check_len(&self.0, expected)
            }

            /// Largest magnitude of any entry, 0 for an empty vector.
            pub fn max_abs(&self) -> f64 {
                self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
            }

            /// `sum |x|^2`.
            pub fn energy(&self) -> f64 {
                self.0.iter().map(|z| z.norm_sqr()).sum()
            }
        }

        impl Deref for $name {
            type Target = [Complex64];

            fn deref(&self) -> &[Complex64] {
                &self.0
            }
        }

        impl DerefMut for $name {
            fn deref_mut(&mut self) -> &mut [Complex64] {
                &mut self.0
            }
        }

        impl From<Vec<Complex64>> for $name {
            fn from(values: Vec<Complex64>) -> Self {
                Self(values)
            }
        }

        impl FromIterator<Complex64> for $name {
            fn from_iter<I: IntoIterator<Item = Complex64>>(iter: I) -> Self {
                Self(iter.into_iter().collect())
            }
        }
    };
}

complex_vector!(
    /// One symbol period's worth of carrier symbols `S_0 .. S_{N-1}`.
    SymbolVector
);

complex_vector!(
    /// One symbol period's worth of time samples `U_0 .. U_{M-1}`.
    SampleVector
);

pub(crate) fn check_len(values: &[Complex64], expected: usize) -> Result<()> {
    if values.len() == expected {
        Ok(())
    } else {
        Err(Error::Dimension {
            expected,
            got: values.len(),
        })
    }
}

complex_vector!(
    /// Per-carrier soft symbol estimates, not restricted to the alphabet.
    SoftEstimate
);
