export { decodeRtf, encodeRtf, rtfByteLength, type RtfTensor } from './rtf.js';
export {
  CliUnavailableError,
  exportActivation,
  importActivation,
  roundtrip,
  type ExportManifest,
  type RoundtripResult,
  type TensorLike,
} from './bridge.js';
