#include "gsr/patch_record.hpp"

#include <string>

namespace gsr {

void PatchRecord::validate() const {
  guide.validate();
  target.validate();
  source.validate();
  if (alpha < 1) throw std::invalid_argument("PatchRecord: alpha must be >= 1");
  if (target.channels != 1) throw dimension_error("PatchRecord: target must have a single channel");
  if (source.channels != 1) throw dimension_error("PatchRecord: source must have a single channel");
  if (guide.height != target.height || guide.width != target.width) {
    throw dimension_error("PatchRecord: guide " + std::to_string(guide.height) + "x" + std::to_string(guide.width) +
                          " and target " + std::to_string(target.height) + "x" + std::to_string(target.width) +
                          " disagree");
  }
  if (target.height % alpha != 0 || target.width % alpha != 0) {
    throw dimension_error("PatchRecord: alpha=" + std::to_string(alpha) + " does not divide H=" +
                          std::to_string(target.height) + ", W=" + std::to_string(target.width));
  }
  if (source.height != target.height / alpha || source.width != target.width / alpha) {
    throw dimension_error("PatchRecord: source dims " + std::to_string(source.height) + "x" +
                          std::to_string(source.width) + " are not H/alpha x W/alpha");
  }
}

}  // namespace gsr
