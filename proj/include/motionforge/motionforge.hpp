#pragma once

// Umbrella header for the motionforge library: k-space rigid-motion
// artifact synthesis, a small from-scratch CNN motion classifier, Grad-CAM
// explanations, and the AES-based evaluation stack.

#include "motionforge/checkpoint.hpp"
#include "motionforge/curve_io.hpp"
#include "motionforge/dataset.hpp"
#include "motionforge/errors.hpp"
#include "motionforge/eval_report.hpp"
#include "motionforge/fft.hpp"
#include "motionforge/gradcam.hpp"
#include "motionforge/image_io.hpp"
#include "motionforge/metrics.hpp"
#include "motionforge/model.hpp"
#include "motionforge/motion.hpp"
#include "motionforge/mrvol.hpp"
#include "motionforge/nifti.hpp"
#include "motionforge/otsu.hpp"
#include "motionforge/parallel.hpp"
#include "motionforge/phantom.hpp"
#include "motionforge/pipeline.hpp"
#include "motionforge/rng.hpp"
#include "motionforge/run_config.hpp"
#include "motionforge/tensor.hpp"
#include "motionforge/train.hpp"
#include "motionforge/volume.hpp"
