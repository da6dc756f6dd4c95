export {
  SCHEMA_VERSION,
  SchemaError,
  parseTimelineDocument,
} from "./schema.js";
export type {
  ClipDoc,
  KeyDoc,
  MotionDirectiveDoc,
  SceneEventDoc,
  TimelineDocument,
  TrackDoc,
  Vec3,
} from "./schema.js";
export { applyTimeline, loadTimelineFromJson } from "./loader.js";
export type { AppliedEvent, ApplyResult, LoadSummary } from "./loader.js";
