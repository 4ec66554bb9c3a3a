#pragma once

#include "oamcrypt/common/rng.hpp"
#include "oamcrypt/mode/fiber.hpp"
#include "oamcrypt/mode/field.hpp"
#include "oamcrypt/mode/field_io.hpp"
#include "oamcrypt/io/pgm.hpp"
#include "oamcrypt/channel/camera.hpp"
#include "oamcrypt/channel/channel.hpp"
#include "oamcrypt/channel/dataset.hpp"
#include "oamcrypt/codec/alphabet.hpp"
#include "oamcrypt/decoder/preprocess.hpp"
#include "oamcrypt/decoder/mlp.hpp"
#include "oamcrypt/decoder/scg.hpp"
#include "oamcrypt/decoder/evaluate.hpp"
#include "oamcrypt/decoder/train.hpp"
#include "oamcrypt/decoder/crosstalk.hpp"
#include "oamcrypt/decoder/model_io.hpp"
#include "oamcrypt/pipeline/workflow.hpp"
