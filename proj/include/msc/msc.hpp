// Umbrella header for the medical segment colorer library.
#pragma once

#include "msc/autodiff.hpp"
#include "msc/balance.hpp"
#include "msc/colorer.hpp"
#include "msc/common.hpp"
#include "msc/corpus.hpp"
#include "msc/embeddings.hpp"
#include "msc/gradcheck.hpp"
#include "msc/metrics.hpp"
#include "msc/model.hpp"
#include "msc/nn.hpp"
#include "msc/optimizer.hpp"
#include "msc/preprocess.hpp"
#include "msc/stopwords.hpp"
#include "msc/synth.hpp"
#include "msc/taxonomy.hpp"
#include "msc/trainer.hpp"
