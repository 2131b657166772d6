//! Parsers that turn corpus files into validated in-memory types.

mod manifest;
mod praat;
mod track;
mod wav;

pub use manifest::{parse_manifest, CorpusManifest, ManifestEntry, MANIFEST_HEADER};
pub use praat::parse_praat_formant;
pub(crate) use track::parse_track_csv_named;
pub use track::{parse_track_csv, Channel, FormantTrack, Frame, TRACK_HEADER};
pub use wav::{encode_wav_pcm16, read_wav, AudioBuffer, MIN_SAMPLE_RATE};
