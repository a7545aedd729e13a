#pragma once

#include "annot/corpus.hpp"
#include "annot/dataset.hpp"
#include "annot/decision_tree.hpp"
#include "annot/descriptors.hpp"
#include "annot/errors.hpp"
#include "annot/evaluate.hpp"
#include "annot/extraction.hpp"
#include "annot/feature.hpp"
#include "annot/feature_table.hpp"
#include "annot/image_io.hpp"
#include "annot/model_io.hpp"
#include "annot/naive_bayes.hpp"
#include "annot/pca.hpp"
#include "annot/raster.hpp"
#include "annot/transforms.hpp"
