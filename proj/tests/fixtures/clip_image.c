MagickExport MagickBooleanType ClipImage(Image *image,
  ExceptionInfo *exception)
{
  if (image->debug != MagickFalse)
    (void) LogMagickEvent(TraceEvent,GetMagickModule(),"%s",image->filename);
  return(ClipImagePath(image,"#1",MagickTrue,exception));
}
