/**
 * Raw tensor file (RTF) reader/writer.
 *
 * Layout, all little-endian:
 *   "RTF1" magic | u8 dimension count | u32 per dimension | f32 data
 */

const MAGIC = 'RTF1';

export interface RtfTensor {
  dims: number[];
  /** Row-major flattened values; length is the product of dims. */
  data: Float32Array;
}

export function rtfByteLength(dims: number[]): number {
  const total = dims.reduce((a, b) => a * b, 1);
  return 4 + 1 + 4 * dims.length + 4 * total;
}

export function encodeRtf(tensor: RtfTensor): Buffer {
  const { dims, data } = tensor;
  if (dims.length < 1 || dims.length > 255) {
    throw new RangeError(`dimension count ${dims.length} outside [1, 255]`);
  }
  const total = dims.reduce((a, b) => a * b, 1);
  for (const d of dims) {
    if (!Number.isInteger(d) || d < 1 || d > 0xffffffff) {
      throw new RangeError(`invalid dimension ${d}`);
    }
  }
  if (data.length !== total) {
    throw new RangeError(`data length ${data.length} != product of dims ${total}`);
  }
  const buf = Buffer.alloc(rtfByteLength(dims));
  let off = buf.write(MAGIC, 0, 'ascii');
  off = buf.writeUInt8(dims.length, off);
  for (const d of dims) off = buf.writeUInt32LE(d, off);
  for (const v of data) off = buf.writeFloatLE(v, off);
  return buf;
}

export function decodeRtf(buf: Buffer): RtfTensor {
  if (buf.length < 5 || buf.toString('ascii', 0, 4) !== MAGIC) {
    throw new Error('not an RTF stream: bad magic');
  }
  const ndims = buf.readUInt8(4);
  let off = 5;
  if (buf.length < off + 4 * ndims) throw new Error('truncated RTF header');
  const dims: number[] = [];
  for (let i = 0; i < ndims; i++) {
    dims.push(buf.readUInt32LE(off));
    off += 4;
  }
  const total = dims.reduce((a, b) => a * b, 1);
  if (buf.length !== off + 4 * total) {
    throw new Error(`RTF payload length ${buf.length - off} != 4*${total}`);
  }
  const data = new Float32Array(total);
  for (let i = 0; i < total; i++) {
    data[i] = buf.readFloatLE(off);
    off += 4;
  }
  return { dims, data };
}
