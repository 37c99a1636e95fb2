//! Compilers between the machine models.

pub mod block;
pub mod editing_to_of;
pub mod enumerate;
pub mod freespace;
pub mod of_to_ts;
pub mod rrw_to_ts;
pub mod sdcode;
pub mod ts_to_of;

pub use block::{block_encode, BlockEncoding, BlockMachine};
pub use editing_to_of::{editing_to_of, editing_to_of_with_limit, EditingToOf};
pub use enumerate::{enumerate_of, enumerate_ts};
pub use freespace::{FreeSpace, ShapeTag};
pub use of_to_ts::of_to_twostack;
pub use ts_to_of::{twostack_to_of, TsToOf};
pub use rrw_to_ts::rrw_to_twostack;
pub use sdcode::{decode_sd, encode_sd, GammaCode, Record};
