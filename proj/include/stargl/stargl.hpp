#ifndef STARGL_STARGL_HPP_
#define STARGL_STARGL_HPP_

// STAR-RIS mmWave broadcasting simulator and green-learning toolkit.

#include "stargl/channel.hpp"
#include "stargl/codec.hpp"
#include "stargl/config.hpp"
#include "stargl/container.hpp"
#include "stargl/dataset.hpp"
#include "stargl/flops.hpp"
#include "stargl/gbdt.hpp"
#include "stargl/manifest.hpp"
#include "stargl/model.hpp"
#include "stargl/rate_oracle.hpp"
#include "stargl/rft.hpp"
#include "stargl/rng.hpp"
#include "stargl/saab.hpp"
#include "stargl/sounding.hpp"
#include "stargl/star_ris.hpp"
#include "stargl/sweep.hpp"
#include "stargl/tensor.hpp"
#include "stargl/threading.hpp"
#include "stargl/types.hpp"

#endif  // STARGL_STARGL_HPP_
