/**
 * Applies a timeline interchange document to a three.js scene.
 *
 * One AnimationClip per timeline clip; per entity track, a position, a
 * quaternion rotation and a scale KeyframeTrack (track names use object
 * UUIDs so entity names with spaces bind cleanly). Scene events become
 * parameterized stand-in records on `scene.userData.sceneEvents`; motion
 * directives go to a sidecar log. Entities missing from the scene degrade
 * to warnings; a schema mismatch aborts.
 */

import * as THREE from "three";

import {
  MotionDirectiveDoc,
  SceneEventDoc,
  TimelineDocument,
  parseTimelineDocument,
} from "./schema.js";

/** Decoration kinds whose stand-in needs a target object in the scene. */
const TARGETED_EVENT_KINDS = new Set([
  "switching camera perspective",
  "light illumination",
  "particle floc",
  "beaming material",
  "camera ring shot",
]);

export interface LoadSummary {
  keyframesApplied: number;
  eventsApplied: number;
  directivesLogged: number;
  warnings: string[];
}

export interface AppliedEvent {
  kind: string;
  target: string | null;
  startFrame: number;
  endFrame: number;
  params: Record<string, unknown>;
}

export interface ApplyResult {
  summary: LoadSummary;
  clips: THREE.AnimationClip[];
  directiveLog: MotionDirectiveDoc[];
}

function eulerToQuaternion(euler: [number, number, number]): THREE.Quaternion {
  return new THREE.Quaternion().setFromEuler(
    new THREE.Euler(euler[0], euler[1], euler[2], "XYZ"),
  );
}

export function applyTimeline(
  doc: TimelineDocument,
  scene: THREE.Object3D,
): ApplyResult {
  const warnings: string[] = [];
  const missing = new Set<string>();
  const clips: THREE.AnimationClip[] = [];
  const directiveLog: MotionDirectiveDoc[] = [];
  const appliedEvents: AppliedEvent[] = [];
  let keyframesApplied = 0;

  const warnMissing = (entity: string, context: string) => {
    if (!missing.has(entity)) {
      missing.add(entity);
      warnings.push(`missing scene object: ${entity} (${context})`);
    }
  };

  for (const clipDoc of doc.clips) {
    const tracks: THREE.KeyframeTrack[] = [];
    for (const trackDoc of clipDoc.tracks) {
      const target = scene.getObjectByName(trackDoc.entity);
      if (!target) {
        warnMissing(trackDoc.entity, `clip ${clipDoc.window_index}`);
        continue;
      }
      const n = trackDoc.keys.length;
      const times = new Float32Array(n);
      const positions = new Float32Array(n * 3);
      const rotations = new Float32Array(n * 4);
      const scales = new Float32Array(n * 3);
      trackDoc.keys.forEach((key, i) => {
        times[i] = key.frame / doc.fps;
        positions.set(key.position, i * 3);
        const quaternion = eulerToQuaternion(key.rotation_euler);
        rotations.set(
          [quaternion.x, quaternion.y, quaternion.z, quaternion.w],
          i * 4,
        );
        scales.set(key.scale, i * 3);
      });
      tracks.push(
        new THREE.VectorKeyframeTrack(
          `${target.uuid}.position`, times, positions),
        new THREE.QuaternionKeyframeTrack(
          `${target.uuid}.quaternion`, times, rotations),
        new THREE.VectorKeyframeTrack(
          `${target.uuid}.scale`, times, scales),
      );
      keyframesApplied += n;

      // leave the object in its last keyed pose, mirroring in-tool loads
      const last = trackDoc.keys[n - 1];
      target.position.set(...last.position);
      target.quaternion.copy(eulerToQuaternion(last.rotation_euler));
      target.scale.set(...last.scale);
    }
    clips.push(
      new THREE.AnimationClip(`clip_${clipDoc.window_index}`, -1, tracks),
    );

    for (const eventDoc of clipDoc.scene_events) {
      if (!applyEvent(eventDoc, scene, warnMissing, appliedEvents)) {
        continue;
      }
    }
    for (const directive of clipDoc.motion_directives) {
      directiveLog.push(directive);
    }
  }

  scene.animations = clips;
  scene.userData.sceneEvents = appliedEvents;
  scene.userData.motionDirectives = directiveLog;

  return {
    summary: {
      keyframesApplied,
      eventsApplied: appliedEvents.length,
      directivesLogged: directiveLog.length,
      warnings,
    },
    clips,
    directiveLog,
  };
}

function applyEvent(
  eventDoc: SceneEventDoc,
  scene: THREE.Object3D,
  warnMissing: (entity: string, context: string) => void,
  applied: AppliedEvent[],
): boolean {
  if (TARGETED_EVENT_KINDS.has(eventDoc.kind)) {
    const targetName = eventDoc.target ?? "";
    if (!targetName || !scene.getObjectByName(targetName)) {
      warnMissing(targetName || "(unnamed)", `event ${eventDoc.kind}`);
      return false;
    }
  }
  applied.push({
    kind: eventDoc.kind,
    target: eventDoc.target,
    startFrame: eventDoc.frame_span[0],
    endFrame: eventDoc.frame_span[1],
    params: eventDoc.params,
  });
  return true;
}

/** Parse interchange bytes and apply them; throws SchemaError on mismatch. */
export function loadTimelineFromJson(
  json: string,
  scene: THREE.Object3D,
): ApplyResult {
  return applyTimeline(parseTimelineDocument(JSON.parse(json)), scene);
}
