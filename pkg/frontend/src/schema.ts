/**
 * Timeline interchange schema (`.s3a.json`, schema_version "1") and its
 * parser. A document that does not match the schema aborts the load.
 */

export const SCHEMA_VERSION = "1";

export type Vec3 = [number, number, number];

export interface KeyDoc {
  frame: number;
  position: Vec3;
  rotation_euler: Vec3;
  scale: Vec3;
}

export interface TrackDoc {
  entity: string;
  keys: KeyDoc[];
}

export interface MotionDirectiveDoc {
  entity: string;
  motion_category: string;
  frame_span: [number, number];
  params: Record<string, unknown>;
}

export interface SceneEventDoc {
  kind: string;
  target: string | null;
  frame_span: [number, number];
  params: Record<string, unknown>;
}

export interface ClipDoc {
  window_index: number;
  start_frame: number;
  end_frame: number;
  tracks: TrackDoc[];
  motion_directives: MotionDirectiveDoc[];
  scene_events: SceneEventDoc[];
}

export interface TimelineDocument {
  schema_version: string;
  fps: number;
  total_frames: number;
  clips: ClipDoc[];
}

export class SchemaError extends Error {}

function isRecord(value: unknown): value is Record<string, unknown> {
  return typeof value === "object" && value !== null && !Array.isArray(value);
}

function isVec3(value: unknown): value is Vec3 {
  return (
    Array.isArray(value) &&
    value.length === 3 &&
    value.every((v) => typeof v === "number" && Number.isFinite(v))
  );
}

function isSpan(value: unknown): value is [number, number] {
  return (
    Array.isArray(value) &&
    value.length === 2 &&
    value.every((v) => Number.isInteger(v))
  );
}

function parseKey(value: unknown, where: string): KeyDoc {
  if (!isRecord(value) || !Number.isInteger(value.frame) ||
      !isVec3(value.position) || !isVec3(value.rotation_euler) ||
      !isVec3(value.scale)) {
    throw new SchemaError(`malformed keyframe in ${where}`);
  }
  return value as unknown as KeyDoc;
}

function parseClip(value: unknown, index: number): ClipDoc {
  if (!isRecord(value)) {
    throw new SchemaError(`clip ${index} is not an object`);
  }
  const where = `clip ${index}`;
  if (!Number.isInteger(value.window_index) ||
      !Number.isInteger(value.start_frame) ||
      !Number.isInteger(value.end_frame)) {
    throw new SchemaError(`${where}: bad frame fields`);
  }
  if (!Array.isArray(value.tracks) ||
      !Array.isArray(value.motion_directives) ||
      !Array.isArray(value.scene_events)) {
    throw new SchemaError(`${where}: missing tracks/directives/events`);
  }
  for (const track of value.tracks) {
    if (!isRecord(track) || typeof track.entity !== "string" ||
        !Array.isArray(track.keys) || track.keys.length === 0) {
      throw new SchemaError(`${where}: malformed track`);
    }
    track.keys.forEach((key) => parseKey(key, where));
  }
  for (const directive of value.motion_directives) {
    if (!isRecord(directive) || typeof directive.entity !== "string" ||
        typeof directive.motion_category !== "string" ||
        !isSpan(directive.frame_span)) {
      throw new SchemaError(`${where}: malformed motion directive`);
    }
  }
  for (const event of value.scene_events) {
    if (!isRecord(event) || typeof event.kind !== "string" ||
        !isSpan(event.frame_span) ||
        (event.target !== null && typeof event.target !== "string")) {
      throw new SchemaError(`${where}: malformed scene event`);
    }
  }
  return value as unknown as ClipDoc;
}

/** Validate a parsed JSON value against schema_version "1". */
export function parseTimelineDocument(value: unknown): TimelineDocument {
  if (!isRecord(value)) {
    throw new SchemaError("interchange document must be an object");
  }
  if (value.schema_version !== SCHEMA_VERSION) {
    throw new SchemaError(
      `unsupported schema_version ${JSON.stringify(value.schema_version)}`,
    );
  }
  if (typeof value.fps !== "number" || value.fps <= 0) {
    throw new SchemaError("fps must be a positive number");
  }
  if (!Number.isInteger(value.total_frames)) {
    throw new SchemaError("total_frames must be an integer");
  }
  if (!Array.isArray(value.clips)) {
    throw new SchemaError("clips must be an array");
  }
  value.clips.forEach((clip, index) => parseClip(clip, index));
  return value as unknown as TimelineDocument;
}
