#![allow(dead_code)]

use corrkit_core::{Correspondence, ModuleElement};
use corrkit_oracles::{CorrData, Mat};

pub fn data(x: &Correspondence) -> CorrData {
    CorrData::new(
        x.algebra().blocks().to_vec(),
        x.module().fibers().to_vec(),
        x.multiplicity().to_vec(),
        x.left_action().unitaries().map(<[Mat]>::to_vec),
    )
}

pub fn blocks(xi: &ModuleElement) -> Vec<Mat> {
    xi.blocks().to_vec()
}
