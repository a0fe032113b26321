//! Image encryption by DNA digital coding, zigzag scanning and substitution
//! against a reference nucleotide sequence.
//!
//! A plaintext byte becomes a quad of bases (`C=00 A=01 T=10 G=11`). The
//! bytes are permuted by a zigzag scan, and each quad is replaced by a
//! position where it occurs in the shared key sequence, found by searching
//! forward from a seeded pseudo-random start. Decryption reads the quads back
//! out of the key sequence and undoes the scan.
//!
//! ```
//! use dnaz::{cipher, image_io::Raster, keystore::KeyStore};
//!
//! let key = KeyStore::from_fasta(">toy\nCATGCATGGGCCAATT\n").unwrap();
//! let img = Raster::new(2, 1, vec![0x1B, 0x1B]).unwrap();
//! let ct = cipher::encrypt(&img, &key, 42).unwrap();
//! assert_eq!(cipher::decrypt(&ct, &key).unwrap(), img);
//! ```
//!
//! The [`analysis`] module holds the security battery: histograms,
//! adjacent-pixel correlation, the XOR mask attack and differential metrics.

pub mod analysis;
pub mod cipher;
pub mod dna_codec;
pub mod error;
pub mod genbank;
pub mod image_io;
pub mod keystore;
pub mod zigzag;

pub use cipher::{decrypt, encrypt, Ciphertext};
pub use error::{Error, Result};
pub use image_io::Raster;
pub use keystore::KeyStore;
